#include "tude/tucker.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

namespace tude {
namespace {

// Fixes each column's sign so its largest-magnitude component is positive,
// making repeated runs reproducible.
void canonicalize_signs(Eigen::MatrixXd& u) {
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
        Eigen::Index imax = 0;
        u.col(c).cwiseAbs().maxCoeff(&imax);
        if (u(imax, c) < 0) u.col(c) = -u.col(c);
    }
}

// Leading r left singular vectors of w. Wide matrices go through the small
// Gram matrix w * w' instead of a full SVD.
Eigen::MatrixXd leading_left_singular_vectors(const Eigen::MatrixXd& w, int r) {
    Eigen::MatrixXd u;
    if (w.cols() >= w.rows()) {
        const Eigen::MatrixXd gram = w * w.transpose();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
        // Eigenvalues come back ascending; take the top r in descending order.
        u.resize(w.rows(), r);
        for (int c = 0; c < r; ++c) u.col(c) = es.eigenvectors().col(w.rows() - 1 - c);
    } else {
        // Thin U has only w.cols() columns; a rank above that needs the full
        // basis, whose trailing columns complete the column space orthogonally.
        const unsigned int options =
            r > w.cols() ? Eigen::ComputeFullU : Eigen::ComputeThinU;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(w, options);
        u = svd.matrixU().leftCols(r);
    }
    canonicalize_signs(u);
    return u;
}

void check_ranks(const Tensor3& a, const Ranks& ranks) {
    for (int i = 0; i < 3; ++i) {
        if (ranks[static_cast<size_t>(i)] < 1) {
            throw std::invalid_argument("tucker: ranks must be positive");
        }
        if (ranks[static_cast<size_t>(i)] > a.dim(i)) {
            throw std::invalid_argument("tucker: rank " + std::to_string(ranks[static_cast<size_t>(i)]) +
                                        " exceeds dimension " + std::to_string(a.dim(i)) +
                                        " of mode " + std::to_string(i + 1));
        }
    }
}

Tensor3 project_core(const Tensor3& a, const std::array<Eigen::MatrixXd, 3>& factors) {
    Tensor3 core = mode_product(a, factors[0].transpose(), 1);
    core = mode_product(core, factors[1].transpose(), 2);
    return mode_product(core, factors[2].transpose(), 3);
}

} // namespace

TuckerModel hosvd_init(const Tensor3& a, const Ranks& ranks) {
    check_ranks(a, ranks);
    TuckerModel model;
    for (int mode = 1; mode <= 3; ++mode) {
        model.factors[static_cast<size_t>(mode - 1)] =
            leading_left_singular_vectors(unfold(a, mode), ranks[static_cast<size_t>(mode - 1)]);
    }
    model.core = project_core(a, model.factors);
    return model;
}

namespace {

// One ALS descent from the given starting model. Every sweep refreshes each
// factor with the leading singular vectors of the projected unfolding, so the
// recorded fit is non-increasing until the rounding plateau.
HooiResult run_sweeps(const Tensor3& a, const Ranks& ranks, const HooiParams& params,
                      TuckerModel start) {
    HooiResult res;
    res.model = std::move(start);

    const double norm_a = a.frobenius_norm();
    // With orthonormal factors, ||A - C x P x Q x R||^2 = ||A||^2 - ||C||^2.
    auto fit_of = [&](const TuckerModel& m) {
        const double c = m.core.frobenius_norm();
        return std::sqrt(std::max(0.0, norm_a * norm_a - c * c));
    };

    res.fit = fit_of(res.model);
    res.fit_history.push_back(res.fit);
    if (norm_a == 0.0) return res;

    TuckerModel work = res.model;
    auto& f = work.factors;
    for (int sweep = 1; sweep <= params.max_iters; ++sweep) {
        {
            Tensor3 g = mode_product(a, f[1].transpose(), 2);
            g = mode_product(g, f[2].transpose(), 3);
            f[0] = leading_left_singular_vectors(unfold(g, 1), ranks[0]);
        }
        {
            Tensor3 g = mode_product(a, f[0].transpose(), 1);
            g = mode_product(g, f[2].transpose(), 3);
            f[1] = leading_left_singular_vectors(unfold(g, 2), ranks[1]);
        }
        {
            Tensor3 g = mode_product(a, f[0].transpose(), 1);
            g = mode_product(g, f[1].transpose(), 2);
            f[2] = leading_left_singular_vectors(unfold(g, 3), ranks[2]);
        }
        work.core = project_core(a, f);
        const double fit = fit_of(work);
        // Each half-step is optimal, so the fit only rises through rounding
        // noise at the convergence plateau; reject such a sweep and keep the
        // best iterate.
        if (fit > res.fit) break;
        const double improvement = (res.fit - fit) / norm_a;
        res.model = work;
        res.fit = fit;
        res.fit_history.push_back(fit);
        res.sweeps = sweep;
        if (improvement < params.tol) break;
    }
    return res;
}

} // namespace

HooiResult hooi(const Tensor3& a, const Ranks& ranks, const HooiParams& params) {
    check_ranks(a, ranks);
    HooiResult res = run_sweeps(a, ranks, params, hosvd_init(a, ranks));

    // The rank-1 objective has spurious ALS basins that the truncated-HOSVD
    // start occasionally lands in. Extra fixed-seed starts keep the returned
    // model the best rank-1 approximation without costing the multi-rank path
    // anything, and the fixed seed keeps repeated runs identical.
    if (ranks == Ranks{1, 1, 1} && a.frobenius_norm() > 0.0) {
        constexpr int kRankOneStarts = 20;
        std::mt19937_64 rng(0x72616e6b31ull);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int s = 0; s < kRankOneStarts; ++s) {
            TuckerModel init;
            for (int mode = 0; mode < 3; ++mode) {
                Eigen::VectorXd v(a.dim(mode));
                for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = gauss(rng);
                if (v.norm() == 0.0) v(0) = 1.0;
                v.normalize();
                init.factors[static_cast<size_t>(mode)] = v;
            }
            init.core = project_core(a, init.factors);
            HooiResult alt = run_sweeps(a, ranks, params, std::move(init));
            if (alt.fit < res.fit) res = std::move(alt);
        }
    }
    return res;
}

TuckerModel hard_threshold_core(TuckerModel model, double delta_thre) {
    if (delta_thre < 0 || delta_thre > 1) {
        throw std::invalid_argument("hard_threshold_core: delta_thre must be in [0, 1]");
    }
    double max_abs = 0.0;
    const int n = model.core.size();
    double* c = model.core.data();
    for (int i = 0; i < n; ++i) max_abs = std::max(max_abs, std::abs(c[i]));
    const double tau = delta_thre * max_abs;
    for (int i = 0; i < n; ++i) {
        if (!(std::abs(c[i]) > tau)) c[i] = 0.0;
    }
    return model;
}

Tensor3 reconstruct(const TuckerModel& model) {
    Tensor3 out = mode_product(model.core, model.factors[0], 1);
    out = mode_product(out, model.factors[1], 2);
    return mode_product(out, model.factors[2], 3);
}

} // namespace tude
