#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tude/patch.hpp"

namespace tude {

// Rotation + translation, applied as p -> R p + t.
struct RigidTransform {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();

    Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return rotation * p + translation; }
    Eigen::MatrixX3d apply(const Eigen::MatrixX3d& pts) const {
        return (pts * rotation.transpose()).rowwise() + translation.transpose();
    }
    RigidTransform inverse() const {
        RigidTransform inv;
        inv.rotation = rotation.transpose();
        inv.translation = -(rotation.transpose() * translation);
        return inv;
    }
    static RigidTransform identity() { return RigidTransform{}; }

    // R'R = I and det R = +1, both to tol.
    bool is_rigid(double tol = 1e-9) const;
};

// Least-squares rigid motion for row-matched point sets (SVD of the
// cross-covariance, reflection-corrected). Rows of source map onto rows of
// target.
RigidTransform kabsch_align(const Eigen::MatrixX3d& source, const Eigen::MatrixX3d& target);

struct IcpParams {
    int max_iters = 30;
    double tol = 1e-8;  // stop when the cost improves by less than this
};

struct IcpResult {
    RigidTransform transform;
    double distance = 0.0;  // final cost: sum of squared distances to matched target points
    int iterations = 0;
    bool degenerate = false;  // collinear/coincident input, rotation frozen to identity
    std::vector<double> cost_history;  // cost of every accepted iterate, non-increasing
};

// Point-to-point ICP aligning source onto target. Correspondences map each
// transformed source point to its nearest target point (k-d tree over the
// target, ties to the lowest index); each step solves the matched-pair
// problem in closed form.
IcpResult icp_align(const Eigen::MatrixX3d& source,
                    const Eigen::MatrixX3d& target,
                    const IcpParams& params = {});

IcpResult icp_align(const PatchMatrix& source,
                    const PatchMatrix& target,
                    const IcpParams& params = {});

} // namespace tude
