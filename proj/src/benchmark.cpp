#include "tude/benchmark.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "tude/cloud_io.hpp"
#include "tude/errors.hpp"
#include "tude/metrics.hpp"
#include "tude/noise.hpp"
#include "tude/synth.hpp"

namespace tude {
namespace {

constexpr double kAbsent = std::numeric_limits<double>::quiet_NaN();

std::string real17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

std::string sigma_tag(double sigma) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", sigma);
    return std::string(buf);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_row_clouds(const PointCloud& noisy, const PointCloud& denoised,
                      const std::string& dir, const std::string& model, double sigma) {
    const std::filesystem::path base(dir);
    std::filesystem::create_directories(base);
    const std::string stem = model + "_sigma" + sigma_tag(sigma);
    write_cloud(noisy, (base / (stem + "_noisy.xyz")).string(), CloudFormat::Xyz);
    write_cloud(denoised, (base / (stem + "_tude.xyz")).string(), CloudFormat::Xyz);
}

BenchmarkRow failed_row(const std::string& model, double sigma, const std::string& why) {
    BenchmarkRow row;
    row.model = model;
    row.sigma = sigma;
    row.mse_noisy = kAbsent;
    row.mse_tude = kAbsent;
    row.mse_rank1 = kAbsent;
    row.mse_no_threshold = kAbsent;
    row.error = why;
    return row;
}

} // namespace

std::vector<ManifestEntry> parse_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest: " + path);
    std::vector<ManifestEntry> entries;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (const size_t hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
        std::istringstream fields(raw);
        ManifestEntry entry;
        if (!(fields >> entry.path)) continue;
        std::string flag;
        if (fields >> flag) {
            if (flag == "normalize") entry.normalize = true;
            else throw ParseError(path, line, "unknown manifest flag '" + flag + "'");
            if (fields >> flag) throw ParseError(path, line, "trailing content '" + flag + "'");
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

std::vector<BenchmarkRow> run_benchmark(const std::vector<PointCloud>& models,
                                        const BenchmarkOptions& options) {
    std::vector<BenchmarkRow> rows;
    rows.reserve(models.size() * options.sigmas.size());
    for (const PointCloud& clean : models) {
        for (double sigma : options.sigmas) {
            BenchmarkRow row;
            row.model = clean.name;
            row.sigma = sigma;
            row.n_points = static_cast<int>(clean.size());
            row.seed = derive_stream_seed(options.seed, clean.name, sigma);
            row.mse_rank1 = kAbsent;
            row.mse_no_threshold = kAbsent;
            try {
                const PointCloud noisy = add_noise(clean, NoiseModel{sigma, row.seed});

                DenoiseConfig cfg = options.config;
                if (options.auto_k) cfg.k = pick_k_for_sigma(sigma);
                row.k = cfg.k;

                const PointCloud denoised = denoise(noisy, cfg).first;
                row.mse_noisy = mse(clean, noisy);
                row.mse_tude = mse(clean, denoised);

                if (options.variants) {
                    DenoiseConfig rank1 = cfg;
                    rank1.ranks = Ranks{1, 1, 1};
                    row.mse_rank1 = mse(clean, denoise(noisy, rank1).first);

                    DenoiseConfig flat = cfg;
                    flat.delta_thre = 0.0;
                    row.mse_no_threshold = mse(clean, denoise(noisy, flat).first);
                }
                if (!options.cloud_out_dir.empty()) {
                    write_row_clouds(noisy, denoised, options.cloud_out_dir, clean.name, sigma);
                }
                row.ok = true;
            } catch (const std::exception& e) {
                row.ok = false;
                row.mse_noisy = kAbsent;
                row.mse_tude = kAbsent;
                row.mse_rank1 = kAbsent;
                row.mse_no_threshold = kAbsent;
                row.error = e.what();
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::vector<BenchmarkRow> run_benchmark(const std::vector<ManifestEntry>& entries,
                                        const BenchmarkOptions& options) {
    std::vector<BenchmarkRow> rows;
    for (const ManifestEntry& entry : entries) {
        std::vector<PointCloud> one;
        try {
            PointCloud cloud = read_cloud(entry.path);
            if (entry.normalize) cloud = normalize_scale(std::move(cloud));
            one.push_back(std::move(cloud));
        } catch (const std::exception& e) {
            const std::string name = std::filesystem::path(entry.path).stem().string();
            for (double sigma : options.sigmas) rows.push_back(failed_row(name, sigma, e.what()));
            continue;
        }
        std::vector<BenchmarkRow> model_rows = run_benchmark(one, options);
        for (auto& row : model_rows) rows.push_back(std::move(row));
    }
    return rows;
}

void write_benchmark_csv(const std::vector<BenchmarkRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "model,sigma,n_points,k,seed,mse_noisy,mse_tude,mse_rank1,mse_no_threshold,status,error\n";
    auto cell = [](double v) { return std::isnan(v) ? std::string() : real17(v); };
    for (const BenchmarkRow& r : rows) {
        out << csv_escape(r.model) << ',' << real17(r.sigma) << ',' << r.n_points << ',' << r.k
            << ',' << r.seed << ',' << cell(r.mse_noisy) << ',' << cell(r.mse_tude) << ','
            << cell(r.mse_rank1) << ',' << cell(r.mse_no_threshold) << ','
            << (r.ok ? "ok" : "failed") << ',' << csv_escape(r.error) << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

std::string format_benchmark_tables(const std::vector<BenchmarkRow>& rows) {
    std::vector<double> sigmas;
    for (const BenchmarkRow& r : rows) {
        bool seen = false;
        for (double s : sigmas) seen = seen || s == r.sigma;
        if (!seen) sigmas.push_back(r.sigma);
    }

    std::ostringstream out;
    auto cell = [](double v) {
        if (std::isnan(v)) return std::string("-");
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return std::string(buf);
    };
    for (size_t si = 0; si < sigmas.size(); ++si) {
        if (si > 0) out << '\n';
        out << "MSE for different models (sigma = " << sigma_tag(sigmas[si]) << ")\n";
        out << std::left << std::setw(16) << "model" << std::right << std::setw(8) << "points"
            << std::setw(5) << "K" << std::setw(12) << "noisy" << std::setw(12) << "tude"
            << std::setw(12) << "rank1" << std::setw(12) << "no_thresh" << '\n';
        for (const BenchmarkRow& r : rows) {
            if (r.sigma != sigmas[si]) continue;
            out << std::left << std::setw(16) << r.model << std::right;
            if (r.ok) {
                out << std::setw(8) << r.n_points << std::setw(5) << r.k << std::setw(12)
                    << cell(r.mse_noisy) << std::setw(12) << cell(r.mse_tude) << std::setw(12)
                    << cell(r.mse_rank1) << std::setw(12) << cell(r.mse_no_threshold);
            } else {
                out << std::setw(8) << "-" << std::setw(5) << "-"
                    << "  failed: " << r.error;
            }
            out << '\n';
        }
    }
    return out.str();
}

} // namespace tude
