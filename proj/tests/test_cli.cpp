#include "doctest.h"

#include "test_util.hpp"

#include "tude/cli.hpp"
#include "tude/cloud_io.hpp"
#include "tude/config_io.hpp"
#include "tude/errors.hpp"
#include "tude/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace tude;

namespace {

// Runs the CLI with both standard streams captured.
struct CliRun {
    int status = 0;
    std::string out;
    std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
    CliRun run;
    {
        tt::StreamCapture cout_cap(std::cout);
        tt::StreamCapture cerr_cap(std::cerr);
        run.status = run_cli(args);
        run.out = cout_cap.text();
        run.err = cerr_cap.text();
    }
    return run;
}

// Restores one environment variable on scope exit.
class EnvVar {
public:
    EnvVar(const char* name, const std::string& value) : name_(name) {
        if (const char* old = std::getenv(name)) old_ = old;
        ::setenv(name, value.c_str(), 1);
    }
    ~EnvVar() {
        if (old_.empty()) ::unsetenv(name_);
        else ::setenv(name_, old_.c_str(), 1);
    }

private:
    const char* name_;
    std::string old_;
};

} // namespace

TEST_SUITE("cli") {

TEST_CASE("synth writes the requested sphere") {
    tt::TempDir dir;
    const std::string out = dir.path("sphere.xyz");
    const CliRun run = cli({"synth", "--shape", "sphere", "--n", "2000", "--out", out});
    CHECK(run.status == 0);
    const PointCloud cloud = read_cloud(out);
    REQUIRE(cloud.size() == 2000);
    for (int i = 0; i < cloud.size(); ++i) {
        CHECK(std::abs(cloud[i].vec().norm() - 1.0) <= 1e-12);
    }
}

TEST_CASE("synth planes and tori satisfy their defining equations") {
    tt::TempDir dir;
    const std::string plane_path = dir.path("plane.xyz");
    const std::string torus_path = dir.path("torus.xyz");
    CHECK(cli({"synth", "--shape", "plane", "--n", "400", "--out", plane_path}).status == 0);
    CHECK(cli({"synth", "--shape", "torus", "--n", "400", "--out", torus_path}).status == 0);

    const PointCloud plane = read_cloud(plane_path);
    REQUIRE(plane.size() == 400);
    for (int i = 0; i < plane.size(); ++i) {
        CHECK(plane[i].z == 0.0);
        CHECK(std::abs(plane[i].x) <= 1.0);
        CHECK(std::abs(plane[i].y) <= 1.0);
    }

    const PointCloud torus = read_cloud(torus_path);
    REQUIRE(torus.size() == 400);
    for (int i = 0; i < torus.size(); ++i) {
        const double ring = std::hypot(torus[i].x, torus[i].y) - 1.0;
        CHECK(std::abs(ring * ring + torus[i].z * torus[i].z - 0.16) <= 1e-9);
    }
}

TEST_CASE("synth normalization hits the requested diagonal") {
    tt::TempDir dir;
    const std::string out = dir.path("big.xyz");
    const CliRun run = cli({"synth", "--shape", "torus", "--n", "500", "--out", out,
                            "--normalize", "--diagonal", "10"});
    CHECK(run.status == 0);
    const PointCloud cloud = read_cloud(out);
    CHECK(std::abs(bounding_box(cloud).diagonal() - 10.0) <= 1e-9);
}

TEST_CASE("unknown shapes and missing options are usage errors") {
    tt::TempDir dir;
    CHECK(cli({"synth", "--shape", "cube", "--n", "100", "--out", dir.path("c.xyz")}).status == 1);
    CHECK(cli({"synth", "--shape", "sphere", "--out", dir.path("s.xyz")}).status == 1);
    CHECK(cli({"frobnicate"}).status == 1);
    CHECK(cli({}).status == 1);
}

TEST_CASE("evaluate prints the symmetric error") {
    tt::TempDir dir;
    const std::string a_path = dir.path("a.xyz");
    const std::string b_path = dir.path("b.xyz");

    PointCloud a;
    a.points = {{0, 0, 0}};
    write_cloud(a, a_path, CloudFormat::Xyz);
    CHECK(cli({"evaluate", "--truth", a_path, "--test", a_path}).out == "0\n");

    PointCloud b;
    b.points = {{2, 0, 0}};
    write_cloud(b, b_path, CloudFormat::Xyz);
    CHECK(cli({"evaluate", "--truth", a_path, "--test", b_path}).out == "4\n");

    tt::Rng rng(601);
    const PointCloud x = tt::random_cloud(rng, 80);
    const PointCloud y = tt::random_cloud(rng, 90);
    write_cloud(x, a_path, CloudFormat::Xyz);
    write_cloud(y, b_path, CloudFormat::Xyz);
    char expect[64];
    std::snprintf(expect, sizeof expect, "%.9g\n", mse(x, y));
    CHECK(cli({"evaluate", "--truth", a_path, "--test", b_path}).out == expect);
}

TEST_CASE("evaluate reports unreadable inputs on stderr") {
    tt::TempDir dir;
    const std::string absent = dir.path("absent.xyz");
    const CliRun run = cli({"evaluate", "--truth", absent, "--test", absent});
    CHECK(run.status == 2);
    CHECK(run.err.find("error:") != std::string::npos);
    CHECK(run.err.find(absent) != std::string::npos);
}

TEST_CASE("denoise runs end to end and reports its settings") {
    tt::TempDir dir;
    const std::string clean_path = dir.path("clean.xyz");
    const std::string noisy_path = dir.path("noisy.xyz");
    const std::string out_path = dir.path("out.xyz");
    const std::string report_path = dir.path("report.txt");

    CHECK(cli({"synth", "--shape", "sphere", "--n", "600", "--out", clean_path,
               "--normalize"}).status == 0);
    CHECK(cli({"add-noise", "--in", clean_path, "--out", noisy_path, "--sigma", "0.08",
               "--seed", "5"}).status == 0);
    const CliRun run = cli({"denoise", "--in", noisy_path, "--out", out_path, "--sigma", "0.08",
                            "--report", report_path});
    CHECK(run.status == 0);

    const std::string report = tt::read_file(report_path);
    CHECK(report.find("k=26\n") != std::string::npos);
    CHECK(report.find("n_points=600\n") != std::string::npos);

    const PointCloud clean = read_cloud(clean_path);
    const PointCloud noisy = read_cloud(noisy_path);
    const PointCloud denoised = read_cloud(out_path);
    REQUIRE(denoised.size() == 600);
    CHECK(mse(clean, denoised) < mse(clean, noisy));
}

TEST_CASE("the report lands on stderr when no file is given") {
    tt::TempDir dir;
    const std::string in_path = dir.path("in.xyz");
    const std::string out_path = dir.path("out.xyz");
    CHECK(cli({"synth", "--shape", "plane", "--n", "200", "--out", in_path}).status == 0);
    const CliRun run = cli({"denoise", "--in", in_path, "--out", out_path, "--k", "10"});
    CHECK(run.status == 0);
    CHECK(run.err.find("k=10\n") != std::string::npos);
    CHECK(run.err.find("groups_formed=") != std::string::npos);
}

TEST_CASE("denoise exit codes separate I/O, usage, and pipeline failures") {
    tt::TempDir dir;
    const std::string small_path = dir.path("small.xyz");
    CHECK(cli({"synth", "--shape", "sphere", "--n", "30", "--out", small_path}).status == 0);

    const CliRun missing = cli({"denoise", "--in", dir.path("absent.xyz"),
                                "--out", dir.path("o.xyz")});
    CHECK(missing.status == 2);
    CHECK(missing.err.find("absent.xyz") != std::string::npos);

    CHECK(cli({"denoise", "--in", small_path}).status == 1);
    CHECK(cli({"denoise", "--in", small_path, "--out", dir.path("o.xyz"),
               "--no-such-flag"}).status == 1);

    const CliRun too_big = cli({"denoise", "--in", small_path, "--out", dir.path("o.xyz"),
                                "--k", "50"});
    CHECK(too_big.status == 3);
    CHECK(too_big.err.find("error:") != std::string::npos);
}

TEST_CASE("repeated denoise runs write identical bytes") {
    tt::TempDir dir;
    const std::string in_path = dir.path("in.xyz");
    CHECK(cli({"synth", "--shape", "torus", "--n", "400", "--out", in_path,
               "--normalize"}).status == 0);
    const std::string noisy_path = dir.path("noisy.xyz");
    CHECK(cli({"add-noise", "--in", in_path, "--out", noisy_path, "--sigma", "0.05"}).status == 0);

    const std::string out1 = dir.path("out1.xyz");
    const std::string out2 = dir.path("out2.xyz");
    CHECK(cli({"denoise", "--in", noisy_path, "--out", out1, "--k", "12"}).status == 0);
    CHECK(cli({"denoise", "--in", noisy_path, "--out", out2, "--k", "12"}).status == 0);
    const std::string bytes = tt::read_file(out1);
    CHECK(!bytes.empty());
    CHECK(bytes == tt::read_file(out2));

    const std::string out3 = dir.path("out3.xyz");
    const std::string out4 = dir.path("out4.xyz");
    CHECK(cli({"denoise", "--in", noisy_path, "--out", out3, "--k", "12",
               "--threads", "2"}).status == 0);
    CHECK(cli({"denoise", "--in", noisy_path, "--out", out4, "--k", "12",
               "--threads", "2"}).status == 0);
    CHECK(tt::read_file(out3) == tt::read_file(out4));
}

TEST_CASE("add-noise is seed-deterministic") {
    tt::TempDir dir;
    const std::string in_path = dir.path("in.xyz");
    CHECK(cli({"synth", "--shape", "sphere", "--n", "150", "--out", in_path}).status == 0);
    const std::string n1 = dir.path("n1.xyz");
    const std::string n2 = dir.path("n2.xyz");
    const std::string n3 = dir.path("n3.xyz");
    CHECK(cli({"add-noise", "--in", in_path, "--out", n1, "--sigma", "0.1",
               "--seed", "9"}).status == 0);
    CHECK(cli({"add-noise", "--in", in_path, "--out", n2, "--sigma", "0.1",
               "--seed", "9"}).status == 0);
    CHECK(cli({"add-noise", "--in", in_path, "--out", n3, "--sigma", "0.1",
               "--seed", "10"}).status == 0);
    CHECK(tt::read_file(n1) == tt::read_file(n2));
    CHECK(tt::read_file(n1) != tt::read_file(n3));
    CHECK(cli({"add-noise", "--in", in_path, "--out", n1}).status == 1);
}

TEST_CASE("config text round-trips through dump and parse") {
    DenoiseConfig cfg;
    cfg.k = 22;
    cfg.delta_sim = 0.7;
    cfg.n_reg = 11;
    cfg.ranks = {2, 1, 4};
    cfg.delta_thre = 0.25;
    cfg.seed_ratio = 0.3;
    cfg.voxel_size = 1.5;
    cfg.icp_max_iters = 40;
    cfg.icp_tol = 1e-9;
    cfg.hooi_max_iters = 60;
    cfg.hooi_tol = 1e-7;
    cfg.threads = 2;

    std::istringstream in(dump_config(cfg));
    const DenoiseConfig back = parse_config(in, "dump");
    CHECK(back.k == cfg.k);
    CHECK(back.delta_sim == cfg.delta_sim);
    CHECK(back.n_reg == cfg.n_reg);
    CHECK(back.ranks == cfg.ranks);
    CHECK(back.delta_thre == cfg.delta_thre);
    CHECK(back.seed_ratio == cfg.seed_ratio);
    CHECK(back.voxel_size == cfg.voxel_size);
    CHECK(back.icp_max_iters == cfg.icp_max_iters);
    CHECK(back.icp_tol == cfg.icp_tol);
    CHECK(back.hooi_max_iters == cfg.hooi_max_iters);
    CHECK(back.hooi_tol == cfg.hooi_tol);
    CHECK(back.threads == cfg.threads);

    const std::string dumped = dump_config(DenoiseConfig{});
    CHECK(dumped.find("k = 21\n") != std::string::npos);
    CHECK(dumped.find("n_reg = 20\n") != std::string::npos);
    CHECK(dumped.find("r1 = 3\n") != std::string::npos);
    CHECK(dumped.find("r2 = 3\n") != std::string::npos);
    CHECK(dumped.find("r3 = 3\n") != std::string::npos);
}

TEST_CASE("config files apply subsets and reject junk") {
    std::istringstream partial("# comment\nk = 25\n\ndelta_thre = 0.2 # inline\n");
    const DenoiseConfig cfg = parse_config(partial, "partial");
    CHECK(cfg.k == 25);
    CHECK(cfg.delta_thre == 0.2);
    CHECK(cfg.n_reg == 20);
    CHECK(cfg.ranks == Ranks{3, 3, 3});

    std::istringstream unknown("frobnicate = 1\n");
    CHECK_THROWS_AS(parse_config(unknown, "unknown"), ParseError);
    std::istringstream malformed("k = banana\n");
    CHECK_THROWS_AS(parse_config(malformed, "malformed"), ParseError);
    std::istringstream bare("k\n");
    CHECK_THROWS_AS(parse_config(bare, "bare"), ParseError);
    CHECK_THROWS_AS(load_config("/nonexistent/tude.conf"), IoError);
}

TEST_CASE("flags beat the config file, which beats the environment") {
    tt::TempDir dir;
    const std::string in_path = dir.path("in.xyz");
    const std::string out_path = dir.path("out.xyz");
    CHECK(cli({"synth", "--shape", "sphere", "--n", "300", "--out", in_path,
               "--normalize"}).status == 0);

    const std::string env_cfg = dir.path("env.conf");
    const std::string file_cfg = dir.path("file.conf");
    tt::write_file(env_cfg, "k = 23\n");
    tt::write_file(file_cfg, "k = 25\n");
    EnvVar guard("TUDE_CONFIG", env_cfg);

    const CliRun from_env = cli({"denoise", "--in", in_path, "--out", out_path});
    CHECK(from_env.status == 0);
    CHECK(from_env.err.find("k=23\n") != std::string::npos);

    const CliRun from_file = cli({"denoise", "--in", in_path, "--out", out_path,
                                  "--config", file_cfg});
    CHECK(from_file.status == 0);
    CHECK(from_file.err.find("k=25\n") != std::string::npos);

    const CliRun from_flag = cli({"denoise", "--in", in_path, "--out", out_path,
                                  "--config", file_cfg, "--k", "19"});
    CHECK(from_flag.status == 0);
    CHECK(from_flag.err.find("k=19\n") != std::string::npos);

    const CliRun flag_over_sigma = cli({"denoise", "--in", in_path, "--out", out_path,
                                        "--sigma", "0.1", "--k", "19"});
    CHECK(flag_over_sigma.status == 0);
    CHECK(flag_over_sigma.err.find("k=19\n") != std::string::npos);
}

TEST_CASE("benchmark sweeps a manifest and flags failures") {
    tt::TempDir dir;
    const std::string model_path = dir.path("good.xyz");
    CHECK(cli({"synth", "--shape", "sphere", "--n", "300", "--out", model_path}).status == 0);

    const std::string manifest = dir.path("models.txt");
    tt::write_file(manifest, model_path + " normalize\n" + dir.path("missing.xyz") + "\n");

    const std::string csv1 = dir.path("r1.csv");
    const std::string tbl1 = dir.path("t1.txt");
    const std::string clouds1 = dir.path("clouds1");
    const CliRun first = cli({"benchmark", "--manifest", manifest, "--sigmas", "0.05",
                              "--csv", csv1, "--table-out", tbl1, "--cloud-dir", clouds1});
    CHECK(first.status == 3);

    const std::string csv = tt::read_file(csv1);
    CHECK(csv.find(",ok,") != std::string::npos);
    CHECK(csv.find(",failed,") != std::string::npos);
    CHECK(tt::read_file(tbl1).find("failed:") != std::string::npos);
    CHECK(std::filesystem::exists(clouds1 + "/good_sigma0.05_noisy.xyz"));
    CHECK(std::filesystem::exists(clouds1 + "/good_sigma0.05_tude.xyz"));

    const std::string csv2 = dir.path("r2.csv");
    const std::string tbl2 = dir.path("t2.txt");
    const std::string clouds2 = dir.path("clouds2");
    const CliRun second = cli({"benchmark", "--manifest", manifest, "--sigmas", "0.05",
                               "--csv", csv2, "--table-out", tbl2, "--cloud-dir", clouds2});
    CHECK(second.status == 3);
    CHECK(csv == tt::read_file(csv2));
    CHECK(tt::read_file(tbl1) == tt::read_file(tbl2));
    CHECK(tt::read_file(clouds1 + "/good_sigma0.05_tude.xyz") ==
          tt::read_file(clouds2 + "/good_sigma0.05_tude.xyz"));

    const std::string ok_manifest = dir.path("ok.txt");
    tt::write_file(ok_manifest, model_path + " normalize\n");
    const CliRun clean = cli({"benchmark", "--manifest", ok_manifest, "--sigmas", "0.05"});
    CHECK(clean.status == 0);
    CHECK(clean.out.find("sigma = 0.05") != std::string::npos);
}

} // TEST_SUITE("cli")
