#include "tude/synth.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tude {
namespace {

void check_count(int n) {
    if (n < 1) throw std::invalid_argument("synth: point count must be positive");
}

double fractional(double x) { return x - std::floor(x); }

// 2D low-discrepancy sequence from powers of the plastic number.
struct LatticePoint {
    double u, v;
};

LatticePoint lattice2(int i) {
    constexpr double plastic = 1.32471795724474602596;
    constexpr double a1 = 1.0 / plastic;
    constexpr double a2 = 1.0 / (plastic * plastic);
    const double t = static_cast<double>(i) + 0.5;
    return {fractional(0.5 + t * a1), fractional(0.5 + t * a2)};
}

// Minor angle whose torus-area CDF equals u: solves
// (psi + (r/R) sin psi) / (2 pi) = u by Newton iteration.
double torus_minor_angle(double u, double radius_ratio) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double psi = two_pi * u;
    for (int iter = 0; iter < 64; ++iter) {
        const double f = (psi + radius_ratio * std::sin(psi)) / two_pi - u;
        if (std::abs(f) < 1e-15) break;
        const double df = (1.0 + radius_ratio * std::cos(psi)) / two_pi;
        psi -= f / df;
    }
    return psi;
}

} // namespace

PointCloud make_sphere(int n) {
    check_count(n);
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    PointCloud cloud;
    cloud.name = "sphere";
    cloud.points.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        const double ring = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden_angle * static_cast<double>(i);
        cloud.points.push_back({ring * std::cos(phi), ring * std::sin(phi), z});
    }
    return cloud;
}

PointCloud make_plane(int n) {
    check_count(n);
    PointCloud cloud;
    cloud.name = "plane";
    cloud.points.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const LatticePoint p = lattice2(i);
        cloud.points.push_back({2.0 * p.u - 1.0, 2.0 * p.v - 1.0, 0.0});
    }
    return cloud;
}

PointCloud make_torus(int n) {
    check_count(n);
    constexpr double major = 1.0;
    constexpr double minor = 0.4;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    PointCloud cloud;
    cloud.name = "torus";
    cloud.points.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const LatticePoint p = lattice2(i);
        const double theta = two_pi * p.u;
        const double psi = torus_minor_angle(p.v, minor / major);
        const double ring = major + minor * std::cos(psi);
        cloud.points.push_back({ring * std::cos(theta), ring * std::sin(theta), minor * std::sin(psi)});
    }
    return cloud;
}

PointCloud make_shape(const std::string& shape, int n) {
    if (shape == "sphere") return make_sphere(n);
    if (shape == "plane") return make_plane(n);
    if (shape == "torus") return make_torus(n);
    throw std::invalid_argument("make_shape: unknown shape '" + shape + "'");
}

PointCloud normalize_scale(PointCloud cloud, double target_diagonal) {
    if (!(target_diagonal > 0.0)) {
        throw std::invalid_argument("normalize_scale: target diagonal must be positive");
    }
    const double diag = bounding_box(cloud).diagonal();
    if (!(diag > 0.0)) {
        throw std::invalid_argument("normalize_scale: cloud has zero bounding-box diagonal");
    }
    const double s = target_diagonal / diag;
    for (Point3& p : cloud.points) {
        p.x *= s;
        p.y *= s;
        p.z *= s;
    }
    return cloud;
}

} // namespace tude
