#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tude/denoise.hpp"
#include "tude/point_cloud.hpp"

namespace tude {

struct ManifestEntry {
    std::string path;
    bool normalize = false;  // rescale to bounding-box diagonal 10 after loading
};

// Manifest format: one model per line, "path [normalize]", '#' comments.
std::vector<ManifestEntry> parse_manifest(const std::string& path);

// One benchmark result per (model, sigma). Variant columns hold NaN when the
// variant was not requested; `error` is empty on success.
struct BenchmarkRow {
    std::string model;
    double sigma = 0.0;
    int n_points = 0;
    int k = 0;
    std::uint64_t seed = 0;  // derived per-row noise stream
    double mse_noisy = 0.0;
    double mse_tude = 0.0;
    double mse_rank1 = 0.0;         // ranks (1,1,1) taken directly
    double mse_no_threshold = 0.0;  // ranks (3,3,3), delta_thre = 0
    bool ok = false;
    std::string error;
};

struct BenchmarkOptions {
    std::vector<double> sigmas{0.04, 0.05, 0.08, 0.1};
    std::uint64_t seed = 1;
    bool variants = false;  // also run the rank-(1,1,1) and no-threshold columns
    bool auto_k = true;     // pick K from sigma; otherwise config.k everywhere
    DenoiseConfig config;
    std::string cloud_out_dir;  // when set, noisy/denoised clouds are written here
};

// Core engine over already-loaded clean models (model name = cloud name).
// A failing row is marked and the run continues.
std::vector<BenchmarkRow> run_benchmark(const std::vector<PointCloud>& models,
                                        const BenchmarkOptions& options);

// Manifest version: loads (and optionally normalizes) each entry; a model
// that cannot be loaded contributes one failed row per sigma.
std::vector<BenchmarkRow> run_benchmark(const std::vector<ManifestEntry>& entries,
                                        const BenchmarkOptions& options);

void write_benchmark_csv(const std::vector<BenchmarkRow>& rows, const std::string& path);

// Human-readable aligned tables, one block per sigma.
std::string format_benchmark_tables(const std::vector<BenchmarkRow>& rows);

} // namespace tude
