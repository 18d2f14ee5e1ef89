#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tude/kdtree.hpp"
#include "tude/point_cloud.hpp"

namespace tude {

// A local surface patch: the K nearest neighbours of a seed point, stored as
// absolute coordinates. Row 0 is always the seed itself.
struct PatchMatrix {
    int seed_index = -1;
    std::vector<int> point_indices;  // row order, point_indices[0] == seed_index
    Eigen::MatrixX3d coords;         // K x 3

    int size() const { return static_cast<int>(coords.rows()); }
    Eigen::RowVector3d seed_position() const { return coords.row(0); }
};

// Extracts one K-point patch per seed. Neighbour rows are sorted by distance
// to the seed (ties by index), which puts the seed itself first.
std::vector<PatchMatrix> extract_patches(const PointCloud& cloud,
                                         const SpatialIndex& index,
                                         const std::vector<int>& seeds,
                                         int k);

PatchMatrix extract_patch(const PointCloud& cloud,
                          const SpatialIndex& index,
                          int seed_index,
                          int k);

} // namespace tude
