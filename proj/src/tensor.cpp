#include "tude/tensor.hpp"

#include <stdexcept>

namespace tude {

Tensor3::Tensor3(int m, int n, int p) : dims_{m, n, p} {
    if (m < 1 || n < 1 || p < 1) throw std::invalid_argument("Tensor3: dims must be positive");
    data_.assign(static_cast<size_t>(m) * static_cast<size_t>(n) * static_cast<size_t>(p), 0.0);
}

double Tensor3::frobenius_norm() const {
    return Eigen::Map<const Eigen::VectorXd>(data_.data(), static_cast<Eigen::Index>(data_.size()))
        .norm();
}

Eigen::MatrixXd Tensor3::frontal_slice(int k) const {
    const int m = dims_[0], n = dims_[1];
    return Eigen::Map<const Eigen::MatrixXd>(data_.data() + offset(0, 0, k), m, n);
}

void Tensor3::set_frontal_slice(int k, const Eigen::MatrixXd& slice) {
    const int m = dims_[0], n = dims_[1];
    if (slice.rows() != m || slice.cols() != n) {
        throw std::invalid_argument("set_frontal_slice: shape mismatch");
    }
    Eigen::Map<Eigen::MatrixXd>(data_.data() + offset(0, 0, k), m, n) = slice;
}

Eigen::MatrixXd unfold(const Tensor3& a, int mode) {
    const int m = a.dim(0), n = a.dim(1), p = a.dim(2);
    switch (mode) {
    case 1:
        // Contiguous: columns (j, k) in storage order already.
        return Eigen::Map<const Eigen::MatrixXd>(a.data(), m, static_cast<Eigen::Index>(n) * p);
    case 2: {
        Eigen::MatrixXd out(n, static_cast<Eigen::Index>(m) * p);
        for (int k = 0; k < p; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < m; ++i) out(j, i + static_cast<Eigen::Index>(m) * k) = a(i, j, k);
        return out;
    }
    case 3: {
        Eigen::MatrixXd out(p, static_cast<Eigen::Index>(m) * n);
        for (int k = 0; k < p; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < m; ++i) out(k, i + static_cast<Eigen::Index>(m) * j) = a(i, j, k);
        return out;
    }
    default:
        throw std::invalid_argument("unfold: mode must be 1, 2 or 3");
    }
}

Tensor3 fold(const Eigen::MatrixXd& mat, int mode, const std::array<int, 3>& dims) {
    const int m = dims[0], n = dims[1], p = dims[2];
    const Eigen::Index rows = mode == 1 ? m : mode == 2 ? n : p;
    const Eigen::Index cols = static_cast<Eigen::Index>(m) * n * p / rows;
    if (mode < 1 || mode > 3) throw std::invalid_argument("fold: mode must be 1, 2 or 3");
    if (mat.rows() != rows || mat.cols() != cols) {
        throw std::invalid_argument("fold: matrix shape does not match dims");
    }
    Tensor3 out(m, n, p);
    switch (mode) {
    case 1:
        Eigen::Map<Eigen::MatrixXd>(out.data(), m, static_cast<Eigen::Index>(n) * p) = mat;
        break;
    case 2:
        for (int k = 0; k < p; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < m; ++i) out(i, j, k) = mat(j, i + static_cast<Eigen::Index>(m) * k);
        break;
    case 3:
        for (int k = 0; k < p; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < m; ++i) out(i, j, k) = mat(k, i + static_cast<Eigen::Index>(m) * j);
        break;
    }
    return out;
}

Tensor3 mode_product(const Tensor3& a, const Eigen::MatrixXd& x, int mode) {
    if (mode < 1 || mode > 3) throw std::invalid_argument("mode_product: mode must be 1, 2 or 3");
    if (x.cols() != a.dim(mode - 1)) {
        throw std::invalid_argument("mode_product: matrix columns must match the tensor mode extent");
    }
    std::array<int, 3> dims = a.dims();
    dims[static_cast<size_t>(mode - 1)] = static_cast<int>(x.rows());
    return fold(x * unfold(a, mode), mode, dims);
}

} // namespace tude
