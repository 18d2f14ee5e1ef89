#include "tude/icp.hpp"

#include <cmath>
#include <stdexcept>

#include "tude/kdtree.hpp"

namespace tude {
namespace {

// Rank of the centered point set drops below 2 when the points are
// coincident or collinear, leaving the rotation underdetermined.
bool rotation_underdetermined(const Eigen::MatrixX3d& pts) {
    const Eigen::MatrixX3d centered = pts.rowwise() - pts.colwise().mean();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
    const auto& s = svd.singularValues();
    return s(0) <= 0.0 || s(1) <= 1e-12 * s(0);
}

RigidTransform translation_align(const Eigen::MatrixX3d& source, const Eigen::MatrixX3d& target) {
    RigidTransform t;
    t.translation = (target.colwise().mean() - source.colwise().mean()).transpose();
    return t;
}

struct Correspondence {
    std::vector<int> target_of;  // target row matched to each source row
    double cost = 0.0;
};

Correspondence match(const Eigen::MatrixX3d& moved_source, const SpatialIndex& target_index) {
    Correspondence c;
    c.target_of.resize(static_cast<size_t>(moved_source.rows()));
    for (Eigen::Index j = 0; j < moved_source.rows(); ++j) {
        const Neighbor nn = target_index.knn(moved_source.row(j).transpose(), 1).front();
        c.target_of[static_cast<size_t>(j)] = nn.index;
        c.cost += nn.distance * nn.distance;
    }
    return c;
}

Eigen::MatrixX3d gather_rows(const Eigen::MatrixX3d& m, const std::vector<int>& rows) {
    Eigen::MatrixX3d out(static_cast<Eigen::Index>(rows.size()), 3);
    for (size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
    return out;
}

} // namespace

bool RigidTransform::is_rigid(double tol) const {
    const double ortho = (rotation.transpose() * rotation - Eigen::Matrix3d::Identity()).norm();
    return ortho <= tol && std::abs(rotation.determinant() - 1.0) <= tol;
}

RigidTransform kabsch_align(const Eigen::MatrixX3d& source, const Eigen::MatrixX3d& target) {
    if (source.rows() != target.rows() || source.rows() == 0) {
        throw std::invalid_argument("kabsch_align: row-matched non-empty point sets required");
    }
    const Eigen::RowVector3d sm = source.colwise().mean();
    const Eigen::RowVector3d tm = target.colwise().mean();
    const Eigen::Matrix3d h =
        (source.rowwise() - sm).transpose() * (target.rowwise() - tm);
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
    d(2, 2) = (svd.matrixV() * svd.matrixU().transpose()).determinant() < 0 ? -1.0 : 1.0;
    RigidTransform t;
    t.rotation = svd.matrixV() * d * svd.matrixU().transpose();
    t.translation = tm.transpose() - t.rotation * sm.transpose();
    return t;
}

IcpResult icp_align(const Eigen::MatrixX3d& source,
                    const Eigen::MatrixX3d& target,
                    const IcpParams& params) {
    if (source.rows() == 0 || target.rows() == 0) {
        throw std::invalid_argument("icp_align: empty patch");
    }
    const bool degenerate =
        rotation_underdetermined(source) || rotation_underdetermined(target);

    const SpatialIndex target_index(target);
    auto run = [&](const RigidTransform& start) {
        IcpResult res;
        res.degenerate = degenerate;
        res.transform = start;
        Correspondence corr = match(start.apply(source), target_index);
        res.distance = corr.cost;
        res.cost_history.push_back(corr.cost);
        for (int iter = 1; iter <= params.max_iters; ++iter) {
            const Eigen::MatrixX3d matched = gather_rows(target, corr.target_of);
            const RigidTransform candidate = degenerate ? translation_align(source, matched)
                                                        : kabsch_align(source, matched);
            Correspondence next = match(candidate.apply(source), target_index);
            // The closed-form step cannot raise the cost except through
            // rounding at the fixed point; such a step is rejected.
            if (next.cost > res.distance) break;
            const double improvement = res.distance - next.cost;
            res.transform = candidate;
            res.distance = next.cost;
            res.cost_history.push_back(next.cost);
            res.iterations = iter;
            corr = std::move(next);
            if (improvement < params.tol) break;
        }
        return res;
    };

    // Two starts, both functions of the patch pair's relative geometry only,
    // so a rigid motion of both patches conjugates every iterate instead of
    // rerouting it. Centroid alignment is the conservative start: it barely
    // moves overlapping patches, keeping them on their shared samples, which
    // downstream stacking depends on, and it never feeds the closed-form step
    // the collapsed correspondence sets a far-displaced start produces, whose
    // near-singular cross-covariance makes the reflection correction
    // ill-conditioned. The row-matched start (rows pair up across equal-size
    // patches, recovering a displaced exact copy in one shot) only wins when
    // it decisively beats centroid alignment: converged cost under half.
    IcpResult res = run(translation_align(source, target));
    if (source.rows() == target.rows()) {
        const RigidTransform rowwise =
            degenerate ? translation_align(source, target) : kabsch_align(source, target);
        IcpResult alt = run(rowwise);
        if (alt.distance < 0.5 * res.distance) res = std::move(alt);
    }
    return res;
}

IcpResult icp_align(const PatchMatrix& source, const PatchMatrix& target, const IcpParams& params) {
    return icp_align(source.coords, target.coords, params);
}

} // namespace tude
