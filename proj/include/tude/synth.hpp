#pragma once

#include <string>

#include "tude/point_cloud.hpp"

namespace tude {

// Deterministic clean samplings used as desk-scale benchmark models.

// n points on the unit sphere via the Fibonacci lattice; all radii are 1 to
// machine precision.
PointCloud make_sphere(int n);

// n points on the square [-1,1]^2 at z = 0, spread by a low-discrepancy
// lattice.
PointCloud make_plane(int n);

// n points on the torus with major radius 1 and minor radius 0.4,
// area-uniform in the surface measure.
PointCloud make_torus(int n);

// Dispatch by name: "sphere", "plane", or "torus". Throws
// std::invalid_argument for anything else.
PointCloud make_shape(const std::string& shape, int n);

// Uniform rescale about the origin so the bounding-box diagonal equals
// target_diagonal. Throws std::invalid_argument for degenerate clouds.
PointCloud normalize_scale(PointCloud cloud, double target_diagonal = 10.0);

} // namespace tude
