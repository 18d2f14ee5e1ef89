#pragma once

#include "tude/point_cloud.hpp"

#include <Eigen/Core>
#include <vector>

namespace tude {

struct Neighbor {
    int index = -1;       // index into the source cloud
    double distance = 0;  // Euclidean distance to the query
};

// Immutable k-d tree over a fixed set of 3D points. Queries are exact:
// results are sorted by ascending distance, ties broken by ascending
// original index. Safe for concurrent queries once built.
class SpatialIndex {
public:
    explicit SpatialIndex(const PointCloud& cloud);
    explicit SpatialIndex(const Eigen::MatrixX3d& points);

    // Exact k nearest neighbors. Throws std::invalid_argument unless
    // 1 <= k <= size().
    std::vector<Neighbor> knn(const Point3& query, int k) const;
    std::vector<Neighbor> knn(const Eigen::Vector3d& query, int k) const;

    int size() const { return static_cast<int>(pts_.size()); }
    Eigen::Vector3d point(int index) const { return pts_[static_cast<size_t>(index)]; }

private:
    void build(int lo, int hi, int depth);

    struct Candidate {
        double dist2;
        int index;
        bool operator<(const Candidate& o) const {
            return dist2 != o.dist2 ? dist2 < o.dist2 : index < o.index;
        }
    };
    void search(int lo, int hi, int depth, const Eigen::Vector3d& q, int k,
                std::vector<Candidate>& heap) const;

    std::vector<Eigen::Vector3d> pts_;
    std::vector<int> order_; // implicit balanced tree: node = middle of [lo, hi)
};

inline SpatialIndex build_index(const PointCloud& cloud) { return SpatialIndex(cloud); }

} // namespace tude
