#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "tude/grouping.hpp"
#include "tude/point_cloud.hpp"
#include "tude/tensor.hpp"
#include "tude/tucker.hpp"

namespace tude {

struct DenoiseConfig {
    int k = 21;                // patch size K
    double delta_sim = 1.0;    // patch similarity threshold
    int n_reg = 20;            // candidate search region
    Ranks ranks{3, 3, 3};      // Tucker ranks (r1, r2, r3)
    double delta_thre = 0.1;   // core thresholding fraction
    double seed_ratio = 0.48;  // target |S|/N when voxel_size is auto-picked
    double voxel_size = 0.0;   // > 0 fixes the seed voxel size directly
    int icp_max_iters = 30;
    double icp_tol = 1e-8;
    int hooi_max_iters = 50;
    double hooi_tol = 1e-8;
    int threads = 0;  // 0 = hardware concurrency

    void validate() const;  // throws std::invalid_argument
    GroupingParams grouping_params() const;
    HooiParams hooi_params() const;
};

// Per-point running mean over all patch estimates that named the point.
struct Accumulator {
    Eigen::MatrixX3d sum;
    Eigen::VectorXi count;

    explicit Accumulator(int n_points);
    int size() const { return static_cast<int>(count.size()); }
    void add(int point, const Eigen::RowVector3d& estimate);
    void merge(const Accumulator& other);
    // Mean position where estimates exist, the original position elsewhere.
    PointCloud finalize(const PointCloud& original) const;
};

struct DenoiseReport {
    int n_points = 0;
    int n_seeds = 0;
    double voxel_size = 0.0;
    int k = 0;
    int groups_formed = 0;
    int groups_denoised = 0;
    int groups_skipped_small = 0;  // failed the size guard, passed through
    double mean_group_size = 0.0;
    int points_covered = 0;
    int points_uncovered = 0;
    int threads_used = 1;
    double seconds_seeds = 0.0;
    double seconds_patches = 0.0;
    double seconds_groups = 0.0;  // grouping + per-group transform
    double seconds_aggregate = 0.0;
    double seconds_total = 0.0;
};

// Group tensor of shape (K, 3, M): slice 0 is the reference patch, slice p
// the p-th member's aligned coordinates.
Tensor3 stack_group(const PatchGroup& group);

// Size guard: a group is transformed only when K > r1 and M > r3. Mode 2 is
// checked non-strictly because its extent is always 3.
bool tucker_guard_ok(const std::array<int, 3>& dims, const Ranks& ranks);

// HOOI + core thresholding + reconstruction when the guard passes; the input
// returned unchanged otherwise. `transformed`, when given, reports which
// branch ran.
Tensor3 denoise_group(const Tensor3& a, const DenoiseConfig& config, bool* transformed = nullptr);

// Maps every tensor slice back through the inverse of its member's rigid
// transform, scatters rows to their original point indices, and averages.
// Points no group touched keep their positions from `cloud`.
PointCloud aggregate(const PointCloud& cloud,
                     const std::vector<std::pair<PatchGroup, Tensor3>>& groups);

// Full pipeline: seed selection, patch extraction, per-reference grouping,
// per-group Tucker thresholding, aggregation.
std::pair<PointCloud, DenoiseReport> denoise(const PointCloud& cloud, const DenoiseConfig& config);

// Patch size for a noise level, interpolated between the tuned anchor pairs
// (0.04, 19), (0.05, 21), (0.08, 26), (0.1, 35) on sigma/scale and clamped
// to [19, 35].
int pick_k_for_sigma(double sigma, double scale = 1.0);

} // namespace tude
