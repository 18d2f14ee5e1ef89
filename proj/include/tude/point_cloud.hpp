#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace tude {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Eigen::Vector3d vec() const { return {x, y, z}; }
    static Point3 from(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }

    bool operator==(const Point3&) const = default;
};

// Ordered set of 3D points. Index order is stable: row i of the position
// matrix is always points[i].
struct PointCloud {
    std::vector<Point3> points;
    std::string name;

    int size() const { return static_cast<int>(points.size()); }
    bool empty() const { return points.empty(); }

    const Point3& operator[](int i) const { return points[static_cast<size_t>(i)]; }
    Point3& operator[](int i) { return points[static_cast<size_t>(i)]; }

    // N x 3 position matrix, rows in point order.
    Eigen::MatrixX3d position_matrix() const;
};

struct BoundingBox {
    Point3 min;
    Point3 max;

    Point3 center() const {
        return {0.5 * (min.x + max.x), 0.5 * (min.y + max.y), 0.5 * (min.z + max.z)};
    }
    double diagonal() const { return (max.vec() - min.vec()).norm(); }
};

// Tight axis-aligned box over all points. Throws std::invalid_argument on an
// empty cloud.
BoundingBox bounding_box(const PointCloud& cloud);

} // namespace tude
