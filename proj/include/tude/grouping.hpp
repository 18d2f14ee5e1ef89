#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tude/icp.hpp"
#include "tude/kdtree.hpp"
#include "tude/patch.hpp"

namespace tude {

struct GroupingParams {
    double delta_sim = 1.0;  // admit when cost/(3K) < delta_sim
    int n_reg = 20;          // candidate patches searched around the reference seed
    IcpParams icp;
};

// Rows of patch/aligned are jointly permuted so aligned row i is the one-to-
// one nearest match of reference row i, making slices agree row-wise when
// stacked; the seed no longer owns row 0 of this copy (seed_index stays valid).
struct GroupMember {
    PatchMatrix patch;
    RigidTransform transform;  // maps patch.coords into the reference frame
    Eigen::MatrixX3d aligned;  // transform.apply(patch.coords), row-sorted as above
    double icp_distance = 0.0;
    bool degenerate = false;
};

// A reference patch with the similar patches aligned onto it. Group size
// M = 1 + members.size(); the reference counts as the identity member.
struct PatchGroup {
    PatchMatrix reference;
    int reference_index = -1;  // position of the reference in the patch list
    std::vector<GroupMember> members;

    int size() const { return 1 + static_cast<int>(members.size()); }
};

// Seed positions of all patches, one row per patch.
Eigen::MatrixX3d seed_positions(const std::vector<PatchMatrix>& patches);

// Forms the group for one reference patch: the n_reg candidates with the
// nearest seeds are ICP-aligned to the reference and admitted when the mean
// per-component cost, cost/(3K), stays below delta_sim. Members are ordered
// by ascending cost (ties by seed index).
PatchGroup group_similar(const std::vector<PatchMatrix>& patches,
                         int reference_index,
                         const GroupingParams& params);

// Same, with a caller-provided index over seed_positions(patches) so the
// candidate search is shared across many references.
PatchGroup group_similar(const std::vector<PatchMatrix>& patches,
                         const SpatialIndex& seed_index,
                         int reference_index,
                         const GroupingParams& params);

} // namespace tude
