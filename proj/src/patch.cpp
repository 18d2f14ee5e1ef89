#include "tude/patch.hpp"

#include <algorithm>
#include <stdexcept>

namespace tude {

PatchMatrix extract_patch(const PointCloud& cloud,
                          const SpatialIndex& index,
                          int seed_index,
                          int k) {
    if (seed_index < 0 || seed_index >= static_cast<int>(cloud.size())) {
        throw std::invalid_argument("extract_patch: seed index out of range");
    }
    std::vector<Neighbor> nn = index.knn(cloud[static_cast<size_t>(seed_index)], k);

    PatchMatrix patch;
    patch.seed_index = seed_index;
    patch.point_indices.reserve(nn.size());
    for (const Neighbor& n : nn) patch.point_indices.push_back(n.index);

    // A coincident point with a lower index can outrank the seed at distance
    // zero; the seed still owns row 0.
    auto it = std::find(patch.point_indices.begin(), patch.point_indices.end(), seed_index);
    if (it == patch.point_indices.end()) {
        throw std::logic_error("extract_patch: seed missing from its own neighbourhood");
    }
    std::rotate(patch.point_indices.begin(), it, it + 1);

    patch.coords.resize(static_cast<Eigen::Index>(patch.point_indices.size()), 3);
    for (size_t r = 0; r < patch.point_indices.size(); ++r) {
        patch.coords.row(static_cast<Eigen::Index>(r)) =
            cloud[static_cast<size_t>(patch.point_indices[r])].vec().transpose();
    }
    return patch;
}

std::vector<PatchMatrix> extract_patches(const PointCloud& cloud,
                                         const SpatialIndex& index,
                                         const std::vector<int>& seeds,
                                         int k) {
    std::vector<PatchMatrix> patches;
    patches.reserve(seeds.size());
    for (int s : seeds) patches.push_back(extract_patch(cloud, index, s, k));
    return patches;
}

} // namespace tude
