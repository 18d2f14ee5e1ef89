#include "tude/point_cloud.hpp"

#include <algorithm>
#include <stdexcept>

namespace tude {

Eigen::MatrixX3d PointCloud::position_matrix() const {
    Eigen::MatrixX3d m(points.size(), 3);
    for (size_t i = 0; i < points.size(); ++i) {
        m(static_cast<Eigen::Index>(i), 0) = points[i].x;
        m(static_cast<Eigen::Index>(i), 1) = points[i].y;
        m(static_cast<Eigen::Index>(i), 2) = points[i].z;
    }
    return m;
}

BoundingBox bounding_box(const PointCloud& cloud) {
    if (cloud.empty()) {
        throw std::invalid_argument("bounding_box: empty cloud");
    }
    BoundingBox bb{cloud.points[0], cloud.points[0]};
    for (const Point3& p : cloud.points) {
        bb.min.x = std::min(bb.min.x, p.x);
        bb.min.y = std::min(bb.min.y, p.y);
        bb.min.z = std::min(bb.min.z, p.z);
        bb.max.x = std::max(bb.max.x, p.x);
        bb.max.y = std::max(bb.max.y, p.y);
        bb.max.z = std::max(bb.max.z, p.z);
    }
    return bb;
}

} // namespace tude
