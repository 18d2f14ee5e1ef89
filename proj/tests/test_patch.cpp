#include "doctest.h"
#include "test_util.hpp"

#include "tude/patch.hpp"

using namespace tude;

TEST_SUITE("patch") {

TEST_CASE("k of one keeps only the seed") {
    tt::Rng rng(41);
    const PointCloud cloud = tt::random_cloud(rng, 30);
    const SpatialIndex index(cloud);
    const std::vector<int> seeds{0, 7, 29};
    const auto patches = extract_patches(cloud, index, seeds, 1);
    REQUIRE(patches.size() == 3);
    for (size_t i = 0; i < seeds.size(); ++i) {
        CHECK(patches[i].seed_index == seeds[i]);
        CHECK(patches[i].point_indices == std::vector<int>{seeds[i]});
        CHECK(patches[i].coords.row(0) == cloud[seeds[i]].vec().transpose());
    }
}

TEST_CASE("collinear points keep their distance order") {
    PointCloud cloud;
    cloud.points = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}};
    const SpatialIndex index(cloud);
    const PatchMatrix patch = extract_patch(cloud, index, 0, 3);
    CHECK(patch.point_indices == std::vector<int>{0, 1, 2});
    CHECK(patch.coords(0, 0) == 0.0);
    CHECK(patch.coords(1, 0) == 1.0);
    CHECK(patch.coords(2, 0) == 2.0);
}

TEST_CASE("patch rows are sorted and mirror the cloud") {
    tt::Rng rng(42);
    const PointCloud cloud = tt::random_cloud(rng, 300);
    const SpatialIndex index(cloud);
    std::vector<int> seeds;
    for (int i = 0; i < 300; i += 17) seeds.push_back(i);
    const auto patches = extract_patches(cloud, index, seeds, 15);
    REQUIRE(patches.size() == seeds.size());
    for (const PatchMatrix& patch : patches) {
        REQUIRE(patch.size() == 15);
        CHECK(patch.point_indices[0] == patch.seed_index);
        const Eigen::RowVector3d seed = patch.seed_position();
        double prev = -1.0;
        for (int r = 0; r < patch.size(); ++r) {
            CHECK(patch.coords.row(r) ==
                  cloud[patch.point_indices[static_cast<size_t>(r)]].vec().transpose());
            const double d = (patch.coords.row(r) - seed).norm();
            CHECK(d >= prev);
            prev = d;
        }
    }
}

TEST_CASE("patch size beyond the cloud is rejected") {
    tt::Rng rng(43);
    const PointCloud cloud = tt::random_cloud(rng, 10);
    const SpatialIndex index(cloud);
    CHECK_THROWS_AS(extract_patch(cloud, index, 0, 11), std::invalid_argument);
}

TEST_CASE("equidistant neighbors break ties by index") {
    PointCloud cloud;
    cloud.points = {{0, 0, 0}, {0, 1, 0}, {1, 0, 0}, {0, -1, 0}, {-1, 0, 0}};
    const SpatialIndex index(cloud);
    const PatchMatrix patch = extract_patch(cloud, index, 0, 5);
    CHECK(patch.point_indices == std::vector<int>{0, 1, 2, 3, 4});
}

} // TEST_SUITE
