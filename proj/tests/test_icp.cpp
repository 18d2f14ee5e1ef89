#include "doctest.h"
#include "test_util.hpp"

#include "tude/icp.hpp"

using namespace tude;

namespace {

Eigen::MatrixX3d random_patch(tt::Rng& rng, int k, double extent = 1.0) {
    std::uniform_real_distribution<double> u(-extent, extent);
    Eigen::MatrixX3d pts(k, 3);
    for (int i = 0; i < k; ++i) pts.row(i) = Eigen::RowVector3d(u(rng), u(rng), u(rng));
    return pts;
}

// The returned cost restated from its definition: every transformed source
// row against its nearest target row.
double recompute_cost(const Eigen::MatrixX3d& source, const Eigen::MatrixX3d& target,
                      const RigidTransform& transform) {
    const Eigen::MatrixX3d moved = transform.apply(source);
    double cost = 0.0;
    for (int i = 0; i < moved.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < target.rows(); ++j) {
            best = std::min(best, (moved.row(i) - target.row(j)).squaredNorm());
        }
        cost += best;
    }
    return cost;
}

} // namespace

TEST_SUITE("icp") {

TEST_CASE("aligning a patch onto itself is the identity") {
    tt::Rng rng(51);
    const Eigen::MatrixX3d patch = random_patch(rng, 21);
    const IcpResult res = icp_align(patch, patch);
    CHECK(res.distance == 0.0);
    CHECK(res.transform.rotation.isApprox(Eigen::Matrix3d::Identity(), 1e-12));
    CHECK(res.transform.translation.norm() <= 1e-12);
    CHECK_FALSE(res.degenerate);
}

TEST_CASE("a rigidly moved copy is recovered") {
    tt::Rng rng(52);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::MatrixX3d source = random_patch(rng, 21);
        const RigidTransform motion = tt::random_rigid(rng, 2.0);
        const Eigen::MatrixX3d target = motion.apply(source);
        const IcpResult res = icp_align(source, target);
        CHECK(res.distance < 1e-8);
        CHECK(res.transform.rotation.isApprox(motion.rotation, 1e-5));
        CHECK((res.transform.translation - motion.translation).norm() < 1e-5);
        CHECK(res.transform.is_rigid());
    }
}

TEST_CASE("reported distance equals the recomputed cost") {
    tt::Rng rng(53);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::MatrixX3d source = random_patch(rng, 18);
        const Eigen::MatrixX3d target = random_patch(rng, 18) * 1.4;
        const IcpResult res = icp_align(source, target);
        const double direct = recompute_cost(source, target, res.transform);
        CHECK(res.distance == doctest::Approx(direct).epsilon(1e-9));
    }
}

TEST_CASE("cost history never increases") {
    tt::Rng rng(54);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::MatrixX3d source = random_patch(rng, 16);
        const Eigen::MatrixX3d target =
            tt::random_rigid(rng, 0.5).apply(random_patch(rng, 16));
        const IcpResult res = icp_align(source, target);
        REQUIRE(!res.cost_history.empty());
        for (size_t i = 0; i + 1 < res.cost_history.size(); ++i) {
            CHECK(res.cost_history[i + 1] <= res.cost_history[i]);
        }
        CHECK(res.distance == res.cost_history.back());
        CHECK(res.transform.is_rigid());
    }
}

TEST_CASE("collinear patches fall back to translation") {
    Eigen::MatrixX3d line(5, 3);
    for (int i = 0; i < 5; ++i) line.row(i) = Eigen::RowVector3d(i, 0, 0);
    Eigen::MatrixX3d shifted = line;
    shifted.col(1).array() += 2.0;
    const IcpResult res = icp_align(line, shifted);
    CHECK(res.degenerate);
    CHECK(res.transform.rotation.isApprox(Eigen::Matrix3d::Identity(), 1e-12));
    CHECK(res.distance < 1e-16);
}

TEST_CASE("kabsch solves the row matched problem exactly") {
    tt::Rng rng(55);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::MatrixX3d source = random_patch(rng, 12);
        const RigidTransform motion = tt::random_rigid(rng, 3.0);
        const RigidTransform got = kabsch_align(source, motion.apply(source));
        CHECK(got.rotation.isApprox(motion.rotation, 1e-9));
        CHECK((got.translation - motion.translation).norm() < 1e-9);
        CHECK(got.is_rigid());
    }
}

TEST_CASE("rigid transform inverse composes to the identity") {
    tt::Rng rng(56);
    const RigidTransform t = tt::random_rigid(rng, 2.0);
    const Eigen::Vector3d p(0.3, -1.1, 0.7);
    CHECK((t.inverse().apply(t.apply(p)) - p).norm() < 1e-12);
}

} // TEST_SUITE
