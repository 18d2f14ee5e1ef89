#include "tude/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "tude/benchmark.hpp"
#include "tude/cloud_io.hpp"
#include "tude/config_io.hpp"
#include "tude/denoise.hpp"
#include "tude/errors.hpp"
#include "tude/metrics.hpp"
#include "tude/noise.hpp"
#include "tude/synth.hpp"

namespace tude {
namespace {

// Flag-level overrides, applied on top of defaults and any config file.
struct ConfigOverrides {
    std::optional<int> k;
    std::optional<double> delta_sim;
    std::optional<int> n_reg;
    std::vector<int> ranks;
    std::optional<double> delta_thre;
    std::optional<double> seed_ratio;
    std::optional<double> voxel_size;
    std::optional<int> icp_max_iters;
    std::optional<double> icp_tol;
    std::optional<int> hooi_max_iters;
    std::optional<double> hooi_tol;
    std::optional<int> threads;
};

void add_override_options(CLI::App* cmd, ConfigOverrides& o) {
    cmd->add_option("--k", o.k, "Patch size K");
    cmd->add_option("--delta-sim", o.delta_sim, "Patch similarity threshold");
    cmd->add_option("--n-reg", o.n_reg, "Candidate search region size");
    cmd->add_option("--ranks", o.ranks, "Tucker ranks: r1 r2 r3")->expected(3);
    cmd->add_option("--delta-thre", o.delta_thre, "Core thresholding fraction in [0,1]");
    cmd->add_option("--seed-ratio", o.seed_ratio, "Target seed/point ratio for auto voxel sizing");
    cmd->add_option("--voxel-size", o.voxel_size, "Fixed seed voxel size (0 = auto)");
    cmd->add_option("--icp-max-iters", o.icp_max_iters, "ICP iteration cap");
    cmd->add_option("--icp-tol", o.icp_tol, "ICP cost improvement tolerance");
    cmd->add_option("--hooi-max-iters", o.hooi_max_iters, "HOOI sweep cap");
    cmd->add_option("--hooi-tol", o.hooi_tol, "HOOI relative fit tolerance");
    cmd->add_option("--threads", o.threads, "Worker threads (0 = hardware concurrency)");
}

DenoiseConfig resolve_config(const std::string& config_flag, const ConfigOverrides& o) {
    DenoiseConfig cfg;
    std::string path = config_flag;
    if (path.empty()) {
        if (const char* env = std::getenv("TUDE_CONFIG")) path = env;
    }
    if (!path.empty()) cfg = load_config(path, cfg);
    if (o.k) cfg.k = *o.k;
    if (o.delta_sim) cfg.delta_sim = *o.delta_sim;
    if (o.n_reg) cfg.n_reg = *o.n_reg;
    if (!o.ranks.empty()) cfg.ranks = Ranks{o.ranks[0], o.ranks[1], o.ranks[2]};
    if (o.delta_thre) cfg.delta_thre = *o.delta_thre;
    if (o.seed_ratio) cfg.seed_ratio = *o.seed_ratio;
    if (o.voxel_size) cfg.voxel_size = *o.voxel_size;
    if (o.icp_max_iters) cfg.icp_max_iters = *o.icp_max_iters;
    if (o.icp_tol) cfg.icp_tol = *o.icp_tol;
    if (o.hooi_max_iters) cfg.hooi_max_iters = *o.hooi_max_iters;
    if (o.hooi_tol) cfg.hooi_tol = *o.hooi_tol;
    if (o.threads) cfg.threads = *o.threads;
    return cfg;
}

CloudFormat parse_format(const std::string& name) {
    if (name == "ply") return CloudFormat::PlyAscii;
    if (name == "xyz") return CloudFormat::Xyz;
    return CloudFormat::Auto;
}

void write_report(std::ostream& out, const DenoiseReport& r) {
    char buf[64];
    auto real = [&buf](double v) {
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return std::string(buf);
    };
    out << "n_points=" << r.n_points << '\n'
        << "n_seeds=" << r.n_seeds << '\n'
        << "voxel_size=" << real(r.voxel_size) << '\n'
        << "k=" << r.k << '\n'
        << "groups_formed=" << r.groups_formed << '\n'
        << "groups_denoised=" << r.groups_denoised << '\n'
        << "groups_skipped_small=" << r.groups_skipped_small << '\n'
        << "mean_group_size=" << real(r.mean_group_size) << '\n'
        << "points_covered=" << r.points_covered << '\n'
        << "points_uncovered=" << r.points_uncovered << '\n'
        << "threads_used=" << r.threads_used << '\n'
        << "seconds_seeds=" << real(r.seconds_seeds) << '\n'
        << "seconds_patches=" << real(r.seconds_patches) << '\n'
        << "seconds_groups=" << real(r.seconds_groups) << '\n'
        << "seconds_aggregate=" << real(r.seconds_aggregate) << '\n'
        << "seconds_total=" << real(r.seconds_total) << '\n';
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Patch-tensor point-cloud denoiser"};
    app.name("tude");
    app.require_subcommand(1);

    int pipeline_status = 0;

    auto* den = app.add_subcommand("denoise", "Denoise a point cloud");
    struct {
        std::string in, out, config, report;
        std::string format = "auto";
        std::optional<double> sigma;
        ConfigOverrides o;
    } d;
    den->add_option("--in", d.in, "Input cloud (.xyz or ASCII .ply)")->required();
    den->add_option("--out", d.out, "Output cloud path")->required();
    den->add_option("--config", d.config, "Config file (default: $TUDE_CONFIG when set)");
    den->add_option("--report", d.report, "Write the run report here (default: stderr)");
    den->add_option("--sigma", d.sigma, "Assumed noise level; sets K when --k is absent");
    den->add_option("--format", d.format, "Output format")->check(CLI::IsMember({"auto", "ply", "xyz"}));
    add_override_options(den, d.o);
    den->callback([&] {
        DenoiseConfig cfg = resolve_config(d.config, d.o);
        if (!d.o.k && d.sigma) cfg.k = pick_k_for_sigma(*d.sigma);
        const PointCloud in = read_cloud(d.in);
        auto [cloud, report] = denoise(in, cfg);
        write_cloud(cloud, d.out, parse_format(d.format));
        if (d.report.empty()) {
            write_report(std::cerr, report);
        } else {
            std::ofstream f(d.report, std::ios::binary);
            if (!f) throw IoError("cannot open for writing: " + d.report);
            write_report(f, report);
        }
    });

    auto* an = app.add_subcommand("add-noise", "Perturb a cloud with Gaussian noise");
    struct {
        std::string in, out;
        std::string format = "auto";
        double sigma = 0.0;
        std::uint64_t seed = 1;
        bool normalize = false;
    } a;
    an->add_option("--in", a.in, "Input cloud")->required();
    an->add_option("--out", a.out, "Output cloud path")->required();
    an->add_option("--sigma", a.sigma, "Per-coordinate standard deviation")->required();
    an->add_option("--seed", a.seed, "RNG seed");
    an->add_flag("--normalize", a.normalize, "Rescale to bounding-box diagonal 10 first");
    an->add_option("--format", a.format, "Output format")->check(CLI::IsMember({"auto", "ply", "xyz"}));
    an->callback([&] {
        PointCloud cloud = read_cloud(a.in);
        if (a.normalize) cloud = normalize_scale(std::move(cloud));
        write_cloud(add_noise(cloud, NoiseModel{a.sigma, a.seed}), a.out, parse_format(a.format));
    });

    auto* ev = app.add_subcommand("evaluate", "Symmetric nearest-neighbor MSE of two clouds");
    struct {
        std::string truth, test;
    } e;
    ev->add_option("--truth", e.truth, "Reference cloud")->required();
    ev->add_option("--test", e.test, "Cloud under evaluation")->required();
    ev->callback([&] {
        const double value = mse(read_cloud(e.truth), read_cloud(e.test));
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.9g\n", value);
        std::cout << buf;
    });

    auto* sy = app.add_subcommand("synth", "Generate a clean synthetic model");
    struct {
        std::string shape, out;
        std::string format = "auto";
        int n = 0;
        bool normalize = false;
        double diagonal = 10.0;
    } s;
    sy->add_option("--shape", s.shape, "sphere, plane, or torus")
        ->required()
        ->check(CLI::IsMember({"sphere", "plane", "torus"}));
    sy->add_option("--n", s.n, "Point count")->required()->check(CLI::Range(10, 100000000));
    sy->add_option("--out", s.out, "Output cloud path")->required();
    sy->add_flag("--normalize", s.normalize, "Rescale to the target bounding-box diagonal");
    sy->add_option("--diagonal", s.diagonal, "Diagonal used by --normalize");
    sy->add_option("--format", s.format, "Output format")->check(CLI::IsMember({"auto", "ply", "xyz"}));
    sy->callback([&] {
        PointCloud cloud = make_shape(s.shape, s.n);
        if (s.normalize) cloud = normalize_scale(std::move(cloud), s.diagonal);
        write_cloud(cloud, s.out, parse_format(s.format));
    });

    auto* be = app.add_subcommand("benchmark", "Noise, denoise, and score a manifest of models");
    struct {
        std::string manifest, csv, table_out, cloud_dir, config;
        std::vector<double> sigmas;
        std::uint64_t seed = 1;
        bool variants = false;
        ConfigOverrides o;
    } b;
    be->add_option("--manifest", b.manifest, "Model list: one 'path [normalize]' per line")->required();
    be->add_option("--csv", b.csv, "Write machine-readable rows to this CSV");
    be->add_option("--table-out", b.table_out, "Write the aligned table here (default: stdout)");
    be->add_option("--cloud-dir", b.cloud_dir, "Directory for noisy/denoised clouds");
    be->add_option("--sigmas", b.sigmas, "Noise levels to sweep")->delimiter(',');
    be->add_option("--seed", b.seed, "Base RNG seed");
    be->add_flag("--variants", b.variants, "Also run rank-(1,1,1) and no-threshold columns");
    be->add_option("--config", b.config, "Config file (default: $TUDE_CONFIG when set)");
    add_override_options(be, b.o);
    be->callback([&] {
        BenchmarkOptions opt;
        opt.config = resolve_config(b.config, b.o);
        if (!b.sigmas.empty()) opt.sigmas = b.sigmas;
        opt.seed = b.seed;
        opt.variants = b.variants;
        opt.cloud_out_dir = b.cloud_dir;
        opt.auto_k = !b.o.k.has_value();
        const std::vector<BenchmarkRow> rows = run_benchmark(parse_manifest(b.manifest), opt);
        if (!b.csv.empty()) write_benchmark_csv(rows, b.csv);
        const std::string table = format_benchmark_tables(rows);
        if (b.table_out.empty()) {
            std::cout << table;
        } else {
            std::ofstream f(b.table_out, std::ios::binary);
            if (!f) throw IoError("cannot open for writing: " + b.table_out);
            f << table;
        }
        for (const BenchmarkRow& row : rows) {
            if (!row.ok) pipeline_status = 3;
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int rc = app.exit(err);
        return rc == 0 ? 0 : 1;
    } catch (const IoError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    } catch (const ParseError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 3;
    }
    return pipeline_status;
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("tude");
    for (const std::string& arg : args) argv.push_back(arg.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

} // namespace tude
