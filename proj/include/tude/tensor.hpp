#pragma once

#include <Eigen/Core>
#include <array>
#include <vector>

namespace tude {

// Dense real 3rd-order tensor. Storage is the column-major generalization:
// element (i, j, k) of an m x n x p tensor lives at data[i + m*j + m*n*k],
// so the mode-1 unfolding is a plain reinterpretation of the buffer.
class Tensor3 {
public:
    Tensor3() = default;
    Tensor3(int m, int n, int p);

    int dim(int axis) const { return dims_[static_cast<size_t>(axis)]; }
    const std::array<int, 3>& dims() const { return dims_; }
    int size() const { return dims_[0] * dims_[1] * dims_[2]; }

    double& operator()(int i, int j, int k) { return data_[offset(i, j, k)]; }
    double operator()(int i, int j, int k) const { return data_[offset(i, j, k)]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    double frobenius_norm() const;

    // Frontal slice A(:, :, k) as an m x n matrix.
    Eigen::MatrixXd frontal_slice(int k) const;
    void set_frontal_slice(int k, const Eigen::MatrixXd& slice);

    bool operator==(const Tensor3& o) const { return dims_ == o.dims_ && data_ == o.data_; }

private:
    size_t offset(int i, int j, int k) const {
        return static_cast<size_t>(i) +
               static_cast<size_t>(dims_[0]) * (static_cast<size_t>(j) +
                                                static_cast<size_t>(dims_[1]) * static_cast<size_t>(k));
    }

    std::array<int, 3> dims_{0, 0, 0};
    std::vector<double> data_;
};

// Mode-n unfolding (n in {1,2,3}): rows indexed by the n-th tensor index,
// columns by the remaining indices with the earlier mode varying fastest.
Eigen::MatrixXd unfold(const Tensor3& a, int mode);

// Inverse of unfold for the given target dims.
Tensor3 fold(const Eigen::MatrixXd& m, int mode, const std::array<int, 3>& dims);

// Mode-n product: contracts the n-th mode with the rows of x
// (x has q rows and as many columns as the tensor extends along that mode),
// e.g. mode 1 gives (a x_1 x)_{ijk} = sum_l a_{ljk} x_{il}.
Tensor3 mode_product(const Tensor3& a, const Eigen::MatrixXd& x, int mode);

} // namespace tude
