#include "tude/seeds.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

namespace tude {
namespace {

struct VoxelKey {
    int32_t c[3];
    bool operator==(const VoxelKey& o) const {
        return c[0] == o.c[0] && c[1] == o.c[1] && c[2] == o.c[2];
    }
};

struct VoxelKeyHash {
    size_t operator()(const VoxelKey& k) const {
        uint64_t h = 1469598103934665603ull;
        for (int32_t v : k.c) {
            h ^= static_cast<uint64_t>(static_cast<uint32_t>(v));
            h *= 1099511628211ull;
        }
        return static_cast<size_t>(h);
    }
};

// Expresses the cloud in its principal-axis frame about the centroid. Axis
// signs are fixed from the data (positive third moment, falling back to the
// sign of the largest-magnitude projection, lowest index on ties), so a
// rigidly moved cloud maps to the same canonical coordinates.
Eigen::MatrixX3d canonical_coords(const PointCloud& cloud) {
    const int n = cloud.size();
    Eigen::MatrixX3d pts(n, 3);
    for (int i = 0; i < n; ++i) pts.row(i) = cloud[i].vec().transpose();
    const Eigen::RowVector3d centroid = pts.colwise().mean();
    const Eigen::MatrixX3d centered = pts.rowwise() - centroid;
    const Eigen::Matrix3d cov = centered.transpose() * centered;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    Eigen::Matrix3d axes = eig.eigenvectors();
    Eigen::MatrixX3d coords = centered * axes;
    for (int a = 0; a < 3; ++a) {
        const double skew = coords.col(a).array().cube().sum();
        const double scale = coords.col(a).array().abs().cube().sum();
        double sign = 0.0;
        if (std::abs(skew) > 1e-9 * scale) {
            sign = skew;
        } else {
            double best = -1.0;
            for (int i = 0; i < n; ++i) {
                if (std::abs(coords(i, a)) > best) {
                    best = std::abs(coords(i, a));
                    sign = coords(i, a);
                }
            }
        }
        if (sign < 0) coords.col(a) = -coords.col(a);
    }
    return coords;
}

} // namespace

SeedSet select_seeds(const PointCloud& cloud, double voxel_size) {
    if (!(voxel_size > 0)) throw std::invalid_argument("select_seeds: voxel_size must be positive");
    if (cloud.empty()) throw std::invalid_argument("select_seeds: empty cloud");

    const Eigen::MatrixX3d coords = canonical_coords(cloud);
    const Eigen::RowVector3d origin = coords.colwise().minCoeff();

    struct Best {
        double dist2;
        int index;
    };
    std::unordered_map<VoxelKey, Best, VoxelKeyHash> best;
    best.reserve(cloud.points.size());

    for (int i = 0; i < cloud.size(); ++i) {
        const Eigen::RowVector3d p = coords.row(i);
        VoxelKey key{};
        Eigen::RowVector3d centroid;
        for (int a = 0; a < 3; ++a) {
            double cell = std::floor((p[a] - origin[a]) / voxel_size);
            if (cell < 0) cell = 0; // points exactly on the min face
            key.c[a] = static_cast<int32_t>(cell);
            centroid[a] = origin[a] + (cell + 0.5) * voxel_size;
        }
        const double d2 = (p - centroid).squaredNorm();
        auto [it, inserted] = best.try_emplace(key, Best{d2, i});
        if (!inserted && (d2 < it->second.dist2 ||
                          (d2 == it->second.dist2 && i < it->second.index))) {
            it->second = Best{d2, i};
        }
    }

    SeedSet seeds;
    seeds.voxel_size = voxel_size;
    seeds.indices.reserve(best.size());
    for (const auto& [key, b] : best) seeds.indices.push_back(b.index);
    std::sort(seeds.indices.begin(), seeds.indices.end());
    return seeds;
}

double auto_voxel_size(const PointCloud& cloud, double seed_ratio, int max_iters) {
    if (!(seed_ratio > 0) || seed_ratio > 1) {
        throw std::invalid_argument("auto_voxel_size: seed_ratio must be in (0, 1]");
    }
    // Bracket on the canonical-frame box diagonal; the world-axis box is not
    // preserved by rigid motions, and the bracket must be.
    const Eigen::MatrixX3d coords = canonical_coords(cloud);
    const double diag =
        (coords.colwise().maxCoeff() - coords.colwise().minCoeff()).norm();
    if (cloud.size() == 1 || diag == 0) return diag > 0 ? diag : 1.0;

    const long target = std::clamp<long>(std::lround(seed_ratio * cloud.size()), 1, cloud.size());
    double lo = diag / 2e5; // fine enough that every point gets its own voxel
    double hi = diag * 1.000001;

    double best_v = hi;
    long best_err = -1;
    for (int it = 0; it < max_iters && hi - lo > 1e-12 * diag; ++it) {
        const double mid = 0.5 * (lo + hi);
        const long count = static_cast<long>(select_seeds(cloud, mid).indices.size());
        const long err = std::labs(count - target);
        if (best_err < 0 || err < best_err) {
            best_err = err;
            best_v = mid;
        }
        if (err == 0) break;
        if (count > target) {
            lo = mid; // too many seeds: grow the voxels
        } else {
            hi = mid;
        }
    }
    return best_v;
}

Coverage coverage_check(const PointCloud& cloud, const SpatialIndex& index, const SeedSet& seeds,
                        int k) {
    if (k < 1 || k > cloud.size()) throw std::invalid_argument("coverage_check: bad k");
    std::vector<char> hit(static_cast<size_t>(cloud.size()), 0);
    for (int s : seeds.indices) {
        for (const Neighbor& nb : index.knn(cloud[s], k)) {
            hit[static_cast<size_t>(nb.index)] = 1;
        }
    }
    Coverage cov;
    for (int i = 0; i < cloud.size(); ++i) {
        if (!hit[static_cast<size_t>(i)]) cov.uncovered.push_back(i);
    }
    cov.covered = cov.uncovered.empty();
    return cov;
}

} // namespace tude
