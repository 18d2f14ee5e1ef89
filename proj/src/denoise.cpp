#include "tude/denoise.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

#include "tude/kdtree.hpp"
#include "tude/patch.hpp"
#include "tude/seeds.hpp"

namespace tude {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Axes from the cloud's own moments, eigenvalues descending. The sign of
// each axis is taken from the first odd moment that is clearly nonzero, so
// the frame follows the cloud under any rigid motion.
Eigen::Matrix3d canonical_axes(const Eigen::MatrixX3d& centered) {
    const Eigen::Matrix3d cov =
        centered.transpose() * centered / static_cast<double>(centered.rows());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
    Eigen::Matrix3d axes;
    for (int a = 0; a < 3; ++a) axes.col(a) = es.eigenvectors().col(2 - a);

    for (int a = 0; a < 3; ++a) {
        const Eigen::VectorXd proj = centered * axes.col(a);
        const double cubed = proj.array().cube().sum();
        const double cubed_abs = proj.array().abs().cube().sum();
        if (cubed_abs > 0.0 && std::abs(cubed) > 1e-8 * cubed_abs) {
            if (cubed < 0.0) axes.col(a) = -axes.col(a);
            continue;
        }
        const Eigen::ArrayXd r2 = centered.rowwise().squaredNorm().array();
        const double radial = (r2 * proj.array()).sum();
        const double radial_abs = (r2 * proj.array().abs()).sum();
        if (radial_abs > 0.0 && std::abs(radial) > 1e-8 * radial_abs) {
            if (radial < 0.0) axes.col(a) = -axes.col(a);
            continue;
        }
        // Last resort for centrally symmetric shapes: point order is not a
        // geometric property, so index weighting is rigid-stable.
        double indexed = 0.0;
        double indexed_abs = 0.0;
        for (Eigen::Index i = 0; i < proj.size(); ++i) {
            indexed += static_cast<double>(i + 1) * proj(i);
            indexed_abs += static_cast<double>(i + 1) * std::abs(proj(i));
        }
        if (indexed_abs > 0.0 && std::abs(indexed) > 1e-8 * indexed_abs && indexed < 0.0) {
            axes.col(a) = -axes.col(a);
        }
    }
    return axes;
}

Tensor3 shift_slices(Tensor3 a, const Eigen::RowVector3d& offset) {
    for (int s = 0; s < a.dim(2); ++s) {
        for (int j = 0; j < 3; ++j) {
            for (int i = 0; i < a.dim(0); ++i) a(i, j, s) += offset(j);
        }
    }
    return a;
}

void scatter_group(const PatchGroup& group, const Tensor3& tensor, Accumulator& acc) {
    const Eigen::MatrixX3d ref = tensor.frontal_slice(0);
    for (Eigen::Index i = 0; i < ref.rows(); ++i) {
        acc.add(group.reference.point_indices[static_cast<size_t>(i)], ref.row(i));
    }
    for (int s = 1; s < tensor.dim(2); ++s) {
        const GroupMember& member = group.members[static_cast<size_t>(s - 1)];
        const Eigen::MatrixX3d slice = tensor.frontal_slice(s);
        const Eigen::MatrixX3d restored = member.transform.inverse().apply(slice);
        for (Eigen::Index i = 0; i < restored.rows(); ++i) {
            acc.add(member.patch.point_indices[static_cast<size_t>(i)], restored.row(i));
        }
    }
}

struct GroupTally {
    int formed = 0;
    int denoised = 0;
    int skipped = 0;
    long long size_sum = 0;
};

int resolve_threads(int requested, int jobs) {
    int t = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (t < 1) t = 1;
    return std::min(t, std::max(1, jobs));
}

} // namespace

void DenoiseConfig::validate() const {
    if (k < 4 || k < ranks[0]) {
        throw std::invalid_argument("config: k must be at least max(r1, 4)");
    }
    for (int r : ranks) {
        if (r < 1) throw std::invalid_argument("config: ranks must be positive");
    }
    if (ranks[1] > 3) throw std::invalid_argument("config: mode-2 rank cannot exceed 3");
    if (!(delta_thre >= 0.0 && delta_thre <= 1.0)) {
        throw std::invalid_argument("config: delta_thre must lie in [0, 1]");
    }
    if (n_reg < 1) throw std::invalid_argument("config: n_reg must be positive");
    if (!(delta_sim > 0.0)) throw std::invalid_argument("config: delta_sim must be positive");
    if (!(seed_ratio > 0.0 && seed_ratio <= 1.0)) {
        throw std::invalid_argument("config: seed_ratio must lie in (0, 1]");
    }
    if (voxel_size < 0.0) throw std::invalid_argument("config: voxel_size must be non-negative");
    if (icp_max_iters < 1) throw std::invalid_argument("config: icp_max_iters must be positive");
    if (hooi_max_iters < 1) throw std::invalid_argument("config: hooi_max_iters must be positive");
    if (icp_tol < 0.0) throw std::invalid_argument("config: icp_tol must be non-negative");
    if (hooi_tol < 0.0) throw std::invalid_argument("config: hooi_tol must be non-negative");
    if (threads < 0) throw std::invalid_argument("config: threads must be non-negative");
}

GroupingParams DenoiseConfig::grouping_params() const {
    GroupingParams gp;
    gp.delta_sim = delta_sim;
    gp.n_reg = n_reg;
    gp.icp = IcpParams{icp_max_iters, icp_tol};
    return gp;
}

HooiParams DenoiseConfig::hooi_params() const { return HooiParams{hooi_max_iters, hooi_tol}; }

Accumulator::Accumulator(int n_points) {
    if (n_points < 0) throw std::invalid_argument("Accumulator: negative size");
    sum = Eigen::MatrixX3d::Zero(n_points, 3);
    count = Eigen::VectorXi::Zero(n_points);
}

void Accumulator::add(int point, const Eigen::RowVector3d& estimate) {
    if (point < 0 || point >= size()) {
        throw std::out_of_range("Accumulator: point index out of range");
    }
    sum.row(point) += estimate;
    count(point) += 1;
}

void Accumulator::merge(const Accumulator& other) {
    if (other.size() != size()) throw std::invalid_argument("Accumulator: size mismatch");
    sum += other.sum;
    count += other.count;
}

PointCloud Accumulator::finalize(const PointCloud& original) const {
    if (static_cast<int>(original.size()) != size()) {
        throw std::invalid_argument("Accumulator: cloud size mismatch");
    }
    PointCloud out = original;
    for (int i = 0; i < size(); ++i) {
        if (count(i) > 0) {
            out.points[static_cast<size_t>(i)] =
                Point3::from(sum.row(i).transpose() / static_cast<double>(count(i)));
        }
    }
    return out;
}

Tensor3 stack_group(const PatchGroup& group) {
    const int k = group.reference.size();
    const int m = group.size();
    Tensor3 a(k, 3, m);
    a.set_frontal_slice(0, group.reference.coords);
    for (int s = 1; s < m; ++s) {
        a.set_frontal_slice(s, group.members[static_cast<size_t>(s - 1)].aligned);
    }
    return a;
}

bool tucker_guard_ok(const std::array<int, 3>& dims, const Ranks& ranks) {
    return dims[0] > ranks[0] && dims[1] >= ranks[1] && dims[2] > ranks[2];
}

Tensor3 denoise_group(const Tensor3& a, const DenoiseConfig& config, bool* transformed) {
    if (!tucker_guard_ok(a.dims(), config.ranks)) {
        if (transformed) *transformed = false;
        return a;
    }
    HooiResult res = hooi(a, config.ranks, config.hooi_params());
    const TuckerModel model = hard_threshold_core(std::move(res.model), config.delta_thre);
    if (transformed) *transformed = true;
    return reconstruct(model);
}

PointCloud aggregate(const PointCloud& cloud,
                     const std::vector<std::pair<PatchGroup, Tensor3>>& groups) {
    Accumulator acc(static_cast<int>(cloud.size()));
    for (const auto& [group, tensor] : groups) {
        if (tensor.dim(0) != group.reference.size() || tensor.dim(1) != 3 ||
            tensor.dim(2) != group.size()) {
            throw std::invalid_argument("aggregate: tensor dimensions do not match group");
        }
        scatter_group(group, tensor, acc);
    }
    return acc.finalize(cloud);
}

std::pair<PointCloud, DenoiseReport> denoise(const PointCloud& cloud, const DenoiseConfig& config) {
    config.validate();
    const int n = static_cast<int>(cloud.size());
    if (n < config.k) {
        throw std::invalid_argument("denoise: cloud has " + std::to_string(n) +
                                    " points, fewer than patch size k=" + std::to_string(config.k));
    }

    DenoiseReport report;
    report.n_points = n;
    report.k = config.k;
    const auto t_total = Clock::now();

    // Seeds are picked in a moment-aligned frame so the voxel grid follows
    // the cloud's pose; everything after works on raw world coordinates.
    auto t_phase = Clock::now();
    const Eigen::MatrixX3d pos = cloud.position_matrix();
    const Eigen::RowVector3d centroid = pos.colwise().mean();
    const Eigen::MatrixX3d centered = pos.rowwise() - centroid;
    const Eigen::Matrix3d axes = canonical_axes(centered);
    const Eigen::MatrixX3d canonical_pos = centered * axes;
    PointCloud canonical;
    canonical.points.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        canonical.points[static_cast<size_t>(i)] = Point3::from(canonical_pos.row(i).transpose());
    }
    const double voxel = config.voxel_size > 0.0
                             ? config.voxel_size
                             : auto_voxel_size(canonical, config.seed_ratio);
    const SeedSet seeds = select_seeds(canonical, voxel);
    report.n_seeds = static_cast<int>(seeds.indices.size());
    report.voxel_size = voxel;
    report.seconds_seeds = seconds_since(t_phase);

    t_phase = Clock::now();
    const SpatialIndex index(cloud);
    const std::vector<PatchMatrix> patches = extract_patches(cloud, index, seeds.indices, config.k);
    const SpatialIndex seed_index(seed_positions(patches));
    report.seconds_patches = seconds_since(t_phase);

    t_phase = Clock::now();
    const int n_groups = static_cast<int>(patches.size());
    const int n_threads = resolve_threads(config.threads, n_groups);
    report.threads_used = n_threads;

    std::vector<Accumulator> accs(static_cast<size_t>(n_threads), Accumulator(n));
    std::vector<GroupTally> tallies(static_cast<size_t>(n_threads));
    const GroupingParams gp = config.grouping_params();

    auto worker = [&](int lo, int hi, Accumulator& acc, GroupTally& tally) {
        for (int r = lo; r < hi; ++r) {
            PatchGroup group = group_similar(patches, seed_index, r, gp);
            Tensor3 a = stack_group(group);
            tally.formed += 1;
            tally.size_sum += group.size();
            if (tucker_guard_ok(a.dims(), config.ranks)) {
                const Eigen::RowVector3d seed_pos = group.reference.seed_position();
                Tensor3 local = shift_slices(std::move(a), -seed_pos);
                Tensor3 restored =
                    shift_slices(denoise_group(local, config, nullptr), seed_pos);
                scatter_group(group, restored, acc);
                tally.denoised += 1;
            } else {
                // Guard failed: the untouched slices flow back unchanged.
                scatter_group(group, a, acc);
                tally.skipped += 1;
            }
        }
    };

    if (n_threads == 1) {
        worker(0, n_groups, accs[0], tallies[0]);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(static_cast<size_t>(n_threads));
        pool.reserve(static_cast<size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) {
            const int lo = static_cast<int>(static_cast<long long>(n_groups) * t / n_threads);
            const int hi = static_cast<int>(static_cast<long long>(n_groups) * (t + 1) / n_threads);
            pool.emplace_back([&, t, lo, hi] {
                try {
                    worker(lo, hi, accs[static_cast<size_t>(t)], tallies[static_cast<size_t>(t)]);
                } catch (...) {
                    errors[static_cast<size_t>(t)] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (const auto& err : errors) {
            if (err) std::rethrow_exception(err);
        }
        // Partial sums merge in thread order so the result only depends on
        // the configured thread count, not on scheduling.
        for (int t = 1; t < n_threads; ++t) accs[0].merge(accs[static_cast<size_t>(t)]);
        for (int t = 1; t < n_threads; ++t) {
            tallies[0].formed += tallies[static_cast<size_t>(t)].formed;
            tallies[0].denoised += tallies[static_cast<size_t>(t)].denoised;
            tallies[0].skipped += tallies[static_cast<size_t>(t)].skipped;
            tallies[0].size_sum += tallies[static_cast<size_t>(t)].size_sum;
        }
    }
    report.seconds_groups = seconds_since(t_phase);

    t_phase = Clock::now();
    PointCloud out = accs[0].finalize(cloud);
    report.groups_formed = tallies[0].formed;
    report.groups_denoised = tallies[0].denoised;
    report.groups_skipped_small = tallies[0].skipped;
    report.mean_group_size =
        tallies[0].formed > 0
            ? static_cast<double>(tallies[0].size_sum) / static_cast<double>(tallies[0].formed)
            : 0.0;
    report.points_covered = static_cast<int>((accs[0].count.array() > 0).count());
    report.points_uncovered = n - report.points_covered;
    report.seconds_aggregate = seconds_since(t_phase);
    report.seconds_total = seconds_since(t_total);
    return {std::move(out), report};
}

int pick_k_for_sigma(double sigma, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("pick_k_for_sigma: scale must be positive");
    if (sigma < 0.0) throw std::invalid_argument("pick_k_for_sigma: sigma must be non-negative");
    static constexpr std::array<std::pair<double, double>, 4> anchors{
        {{0.04, 19.0}, {0.05, 21.0}, {0.08, 26.0}, {0.1, 35.0}}};
    const double s = sigma / scale;
    double k = anchors.back().second;
    if (s <= anchors.front().first) {
        k = anchors.front().second;
    } else if (s < anchors.back().first) {
        for (size_t i = 1; i < anchors.size(); ++i) {
            if (s <= anchors[i].first) {
                const auto [s0, k0] = anchors[i - 1];
                const auto [s1, k1] = anchors[i];
                k = k0 + (k1 - k0) * (s - s0) / (s1 - s0);
                break;
            }
        }
    }
    return static_cast<int>(std::lround(std::clamp(k, 19.0, 35.0)));
}

} // namespace tude
