#pragma once

#include "tude/tensor.hpp"

#include <Eigen/Core>
#include <array>
#include <vector>

namespace tude {

using Ranks = std::array<int, 3>;

// Tucker model A ~ core x_1 factors[0] x_2 factors[1] x_3 factors[2].
// Each factor has orthonormal columns; factor[i] is dim_i x rank_i.
struct TuckerModel {
    Tensor3 core;
    std::array<Eigen::MatrixXd, 3> factors;

    Ranks ranks() const {
        return {static_cast<int>(factors[0].cols()), static_cast<int>(factors[1].cols()),
                static_cast<int>(factors[2].cols())};
    }
};

struct HooiParams {
    int max_iters = 50;
    double tol = 1e-8; // stop when the normalized fit improves by less than this
};

struct HooiResult {
    TuckerModel model;
    double fit = 0.0; // ||A - reconstruct(model)|| at the returned model
    int sweeps = 0;
    std::vector<double> fit_history; // fit after init and after each sweep
};

// Truncated HOSVD: per-mode leading left singular vectors of the unfoldings,
// core = A x_1 P' x_2 Q' x_3 R'. Throws std::invalid_argument when a rank
// exceeds the matching dimension.
TuckerModel hosvd_init(const Tensor3& a, const Ranks& ranks);

// Higher-order orthogonal iterations from the HOSVD starting point. Each
// sweep recomputes one factor at a time from the leading singular vectors of
// the partially projected tensor; the fit never increases. Non-convergence
// within max_iters is not an error: the best iterate is returned.
HooiResult hooi(const Tensor3& a, const Ranks& ranks, const HooiParams& params = {});

// Keeps core entries with |c| strictly larger than delta_thre * max|core|,
// zeroes the rest. Factors are untouched. For delta_thre < 1 the maximal
// entry always survives.
TuckerModel hard_threshold_core(TuckerModel model, double delta_thre);

// core x_1 P x_2 Q x_3 R.
Tensor3 reconstruct(const TuckerModel& model);

} // namespace tude
