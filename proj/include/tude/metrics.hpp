#pragma once

#include "tude/point_cloud.hpp"

namespace tude {

// Symmetric nearest-neighbor mean squared error:
//   (1/2) (mean over test of d^2 to nearest truth point
//        + mean over truth of d^2 to nearest test point).
// Units are squared model units. Throws std::invalid_argument on empty input.
double mse(const PointCloud& ground_truth, const PointCloud& test);

} // namespace tude
