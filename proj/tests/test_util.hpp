#pragma once

#include "tude/icp.hpp"
#include "tude/point_cloud.hpp"
#include "tude/tensor.hpp"
#include "tude/tucker.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace tt {

using Rng = std::mt19937_64;

// Self-deleting scratch directory; every test writes only under its root.
class TempDir {
public:
    TempDir() {
        auto base = std::filesystem::temp_directory_path();
        for (int i = 0; i < 10000; ++i) {
            auto candidate = base / ("tude_test_" + std::to_string(counter_++));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                root_ = candidate;
                return;
            }
        }
        throw std::runtime_error("TempDir: could not create a scratch directory");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(root_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string path(const std::string& name) const { return (root_ / name).string(); }
    const std::filesystem::path& root() const { return root_; }

private:
    static inline int counter_ = 0;
    std::filesystem::path root_;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

// Redirects a std::ostream into a buffer for the capture's lifetime.
class StreamCapture {
public:
    explicit StreamCapture(std::ostream& stream) : stream_(stream), old_(stream.rdbuf(buffer_.rdbuf())) {}
    ~StreamCapture() { stream_.rdbuf(old_); }
    std::string text() const { return buffer_.str(); }

private:
    std::ostream& stream_;
    std::ostringstream buffer_;
    std::streambuf* old_;
};

inline tude::PointCloud random_cloud(Rng& rng, int n, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    tude::PointCloud cloud;
    cloud.points.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) cloud.points.push_back({u(rng), u(rng), u(rng)});
    return cloud;
}

inline Eigen::Matrix3d random_rotation(Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = g(rng);
    Eigen::HouseholderQR<Eigen::Matrix3d> qr(m);
    Eigen::Matrix3d q = qr.householderQ();
    if (q.determinant() < 0) q.col(0) = -q.col(0);
    return q;
}

inline tude::RigidTransform random_rigid(Rng& rng, double translation_scale = 1.0) {
    std::normal_distribution<double> g(0.0, translation_scale);
    tude::RigidTransform t;
    t.rotation = random_rotation(rng);
    t.translation = Eigen::Vector3d(g(rng), g(rng), g(rng));
    return t;
}

inline tude::PointCloud apply_rigid(const tude::RigidTransform& t, const tude::PointCloud& cloud) {
    tude::PointCloud out = cloud;
    for (auto& p : out.points) p = tude::Point3::from(t.apply(p.vec()));
    return out;
}

// Linear-scan k nearest neighbors: (distance, index) ascending, ties by index.
inline std::vector<std::pair<double, int>> brute_knn(const tude::PointCloud& cloud,
                                                     const Eigen::Vector3d& query, int k) {
    std::vector<std::pair<double, int>> all;
    all.reserve(static_cast<size_t>(cloud.size()));
    for (int i = 0; i < cloud.size(); ++i) {
        all.emplace_back((cloud[i].vec() - query).norm(), i);
    }
    std::sort(all.begin(), all.end());
    all.resize(static_cast<size_t>(k));
    return all;
}

// O(N^2) symmetric nearest-neighbor MSE.
inline double brute_mse(const tude::PointCloud& truth, const tude::PointCloud& test) {
    auto one_sided = [](const tude::PointCloud& from, const tude::PointCloud& to) {
        double total = 0.0;
        for (const auto& p : from.points) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : to.points) {
                best = std::min(best, (p.vec() - q.vec()).squaredNorm());
            }
            total += best;
        }
        return total / static_cast<double>(from.points.size());
    };
    return 0.5 * (one_sided(test, truth) + one_sided(truth, test));
}

inline Eigen::MatrixXd random_orthonormal(Rng& rng, int rows, int cols) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXd m(rows, rows);
    for (int i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    Eigen::MatrixXd q = qr.householderQ();
    return q.leftCols(cols);
}

inline tude::Tensor3 random_tensor(Rng& rng, int m, int n, int p, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    tude::Tensor3 a(m, n, p);
    for (int k = 0; k < p; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < m; ++i) a(i, j, k) = g(rng);
    return a;
}

// Triple loop over the defining sum of the mode-n product.
inline tude::Tensor3 naive_mode_product(const tude::Tensor3& a, const Eigen::MatrixXd& x, int mode) {
    const int m = a.dim(0), n = a.dim(1), p = a.dim(2);
    const int q = static_cast<int>(x.rows());
    const int d0 = mode == 1 ? q : m;
    const int d1 = mode == 2 ? q : n;
    const int d2 = mode == 3 ? q : p;
    tude::Tensor3 out(d0, d1, d2);
    for (int i = 0; i < d0; ++i) {
        for (int j = 0; j < d1; ++j) {
            for (int k = 0; k < d2; ++k) {
                double s = 0.0;
                if (mode == 1) {
                    for (int l = 0; l < m; ++l) s += a(l, j, k) * x(i, l);
                } else if (mode == 2) {
                    for (int l = 0; l < n; ++l) s += a(i, l, k) * x(j, l);
                } else {
                    for (int l = 0; l < p; ++l) s += a(i, j, l) * x(k, l);
                }
                out(i, j, k) = s;
            }
        }
    }
    return out;
}

// Quadruple loop over sum_{abc} C_abc P_ia Q_jb R_kc.
inline tude::Tensor3 naive_reconstruct(const tude::TuckerModel& model) {
    const auto& c = model.core;
    const auto& pf = model.factors[0];
    const auto& qf = model.factors[1];
    const auto& rf = model.factors[2];
    tude::Tensor3 out(static_cast<int>(pf.rows()), static_cast<int>(qf.rows()),
                      static_cast<int>(rf.rows()));
    for (int i = 0; i < out.dim(0); ++i) {
        for (int j = 0; j < out.dim(1); ++j) {
            for (int k = 0; k < out.dim(2); ++k) {
                double s = 0.0;
                for (int a = 0; a < c.dim(0); ++a)
                    for (int b = 0; b < c.dim(1); ++b)
                        for (int d = 0; d < c.dim(2); ++d)
                            s += c(a, b, d) * pf(i, a) * qf(j, b) * rf(k, d);
                out(i, j, k) = s;
            }
        }
    }
    return out;
}

inline double max_abs_diff(const tude::Tensor3& a, const tude::Tensor3& b) {
    double worst = 0.0;
    for (int i = 0; i < a.dim(0); ++i)
        for (int j = 0; j < a.dim(1); ++j)
            for (int k = 0; k < a.dim(2); ++k)
                worst = std::max(worst, std::abs(a(i, j, k) - b(i, j, k)));
    return worst;
}

// Best rank-1 fit ||A - s (u o v o w)|| by higher-order power iteration from
// several random starts; an independent check for rank-(1,1,1) HOOI.
inline double hopm_rank1_fit(const tude::Tensor3& a, int starts, int iters, Rng& rng) {
    const int m = a.dim(0), n = a.dim(1), p = a.dim(2);
    std::normal_distribution<double> g(0.0, 1.0);
    double best_sigma = 0.0;
    for (int s = 0; s < starts; ++s) {
        Eigen::VectorXd u(m), v(n), w(p);
        for (int i = 0; i < m; ++i) u(i) = g(rng);
        for (int i = 0; i < n; ++i) v(i) = g(rng);
        for (int i = 0; i < p; ++i) w(i) = g(rng);
        u.normalize();
        v.normalize();
        w.normalize();
        double sigma = 0.0;
        for (int it = 0; it < iters; ++it) {
            for (int i = 0; i < m; ++i) {
                double acc = 0.0;
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < p; ++k) acc += a(i, j, k) * v(j) * w(k);
                u(i) = acc;
            }
            u.normalize();
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int i = 0; i < m; ++i)
                    for (int k = 0; k < p; ++k) acc += a(i, j, k) * u(i) * w(k);
                v(j) = acc;
            }
            v.normalize();
            double norm = 0.0;
            for (int k = 0; k < p; ++k) {
                double acc = 0.0;
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < n; ++j) acc += a(i, j, k) * u(i) * v(j);
                w(k) = acc;
                norm += acc * acc;
            }
            sigma = std::sqrt(norm);
            w.normalize();
        }
        best_sigma = std::max(best_sigma, sigma);
    }
    const double total = a.frobenius_norm();
    return std::sqrt(std::max(0.0, total * total - best_sigma * best_sigma));
}

} // namespace tt
