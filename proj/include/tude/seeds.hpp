#pragma once

#include "tude/kdtree.hpp"
#include "tude/point_cloud.hpp"

#include <vector>

namespace tude {

// Seed points chosen by voxel-grid downsampling: at most one seed per
// occupied voxel, each seed a member of the original cloud.
struct SeedSet {
    std::vector<int> indices;  // ascending point indices
    double voxel_size = 0.0;
};

// Partitions the bounding box into cubic voxels of edge voxel_size and keeps,
// per non-empty voxel, the cloud point nearest the voxel centroid (ties to
// the lowest index). The box and grid live in a frame derived from the cloud's
// principal axes with data-fixed signs, so the partition follows the cloud's
// orientation and a rigidly moved cloud yields the same seeds. Deterministic;
// result ordered by ascending point index.
SeedSet select_seeds(const PointCloud& cloud, double voxel_size);

// Bisection on voxel_size so that |seeds| / N approximates seed_ratio.
double auto_voxel_size(const PointCloud& cloud, double seed_ratio, int max_iters = 48);

struct Coverage {
    bool covered = false;
    std::vector<int> uncovered; // point indices missed by every seed patch
};

// Checks that the union of the k-nearest neighborhoods of all seeds contains
// every point of the cloud.
Coverage coverage_check(const PointCloud& cloud, const SpatialIndex& index, const SeedSet& seeds,
                        int k);

} // namespace tude
