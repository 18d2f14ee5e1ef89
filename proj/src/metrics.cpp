#include "tude/metrics.hpp"

#include <stdexcept>

#include "tude/kdtree.hpp"

namespace tude {
namespace {

double one_sided_mean_sq(const PointCloud& from, const SpatialIndex& to_index) {
    double total = 0.0;
    for (const Point3& p : from.points) {
        const Neighbor nn = to_index.knn(p, 1).front();
        total += nn.distance * nn.distance;
    }
    return total / static_cast<double>(from.size());
}

} // namespace

double mse(const PointCloud& ground_truth, const PointCloud& test) {
    if (ground_truth.empty() || test.empty()) {
        throw std::invalid_argument("mse: clouds must be non-empty");
    }
    const SpatialIndex truth_index(ground_truth);
    const SpatialIndex test_index(test);
    return 0.5 * (one_sided_mean_sq(test, truth_index) + one_sided_mean_sq(ground_truth, test_index));
}

} // namespace tude
