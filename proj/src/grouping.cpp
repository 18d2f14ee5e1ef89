#include "tude/grouping.hpp"

#include <algorithm>
#include <stdexcept>

namespace tude {
namespace {

// Jointly permutes the member's rows so row i holds the aligned point paired
// with reference row i. Pairing is a greedy one-to-one assignment taken in
// ascending distance order, so shared cloud points pair with themselves and
// the rest pair with their nearest unclaimed counterpart. Row-wise agreement
// across slices is what makes the stacked group compressible; the joint
// permutation keeps aligned, coords, and point indices consistent. Ties
// break on row indices, keeping the result order deterministic.
void match_rows(GroupMember& member, const Eigen::MatrixX3d& ref_rows) {
    const int k = static_cast<int>(member.aligned.rows());
    struct Pair {
        double d2;
        int ref;
        int mem;
    };
    std::vector<Pair> pairs;
    pairs.reserve(static_cast<size_t>(k) * static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            pairs.push_back({(ref_rows.row(i) - member.aligned.row(j)).squaredNorm(), i, j});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.d2 != b.d2) return a.d2 < b.d2;
        if (a.ref != b.ref) return a.ref < b.ref;
        return a.mem < b.mem;
    });
    std::vector<int> slot_of_mem(static_cast<size_t>(k), -1);
    std::vector<char> ref_used(static_cast<size_t>(k), 0);
    int assigned = 0;
    for (const Pair& p : pairs) {
        if (assigned == k) break;
        if (ref_used[static_cast<size_t>(p.ref)] || slot_of_mem[static_cast<size_t>(p.mem)] >= 0) {
            continue;
        }
        ref_used[static_cast<size_t>(p.ref)] = 1;
        slot_of_mem[static_cast<size_t>(p.mem)] = p.ref;
        ++assigned;
    }
    Eigen::MatrixX3d aligned(k, 3), coords(k, 3);
    std::vector<int> indices(static_cast<size_t>(k));
    for (int j = 0; j < k; ++j) {
        const int slot = slot_of_mem[static_cast<size_t>(j)];
        aligned.row(slot) = member.aligned.row(j);
        coords.row(slot) = member.patch.coords.row(j);
        indices[static_cast<size_t>(slot)] = member.patch.point_indices[static_cast<size_t>(j)];
    }
    member.aligned = std::move(aligned);
    member.patch.coords = std::move(coords);
    member.patch.point_indices = std::move(indices);
}

PatchGroup form_group(const std::vector<PatchMatrix>& patches,
                      int reference_index,
                      const std::vector<int>& candidates,
                      const GroupingParams& params) {
    PatchGroup group;
    group.reference = patches[static_cast<size_t>(reference_index)];
    group.reference_index = reference_index;
    const double k = static_cast<double>(group.reference.size());

    for (int c : candidates) {
        const PatchMatrix& candidate = patches[static_cast<size_t>(c)];
        IcpResult icp = icp_align(candidate, group.reference, params.icp);
        if (icp.distance / (3.0 * k) >= params.delta_sim) continue;
        GroupMember member;
        member.patch = candidate;
        member.transform = icp.transform;
        member.aligned = icp.transform.apply(candidate.coords);
        member.icp_distance = icp.distance;
        member.degenerate = icp.degenerate;
        match_rows(member, group.reference.coords);
        group.members.push_back(std::move(member));
    }
    std::sort(group.members.begin(), group.members.end(),
              [](const GroupMember& a, const GroupMember& b) {
                  if (a.icp_distance != b.icp_distance) return a.icp_distance < b.icp_distance;
                  return a.patch.seed_index < b.patch.seed_index;
              });
    return group;
}

void check_reference(const std::vector<PatchMatrix>& patches, int reference_index) {
    if (reference_index < 0 || reference_index >= static_cast<int>(patches.size())) {
        throw std::invalid_argument("group_similar: reference index out of range");
    }
}

} // namespace

Eigen::MatrixX3d seed_positions(const std::vector<PatchMatrix>& patches) {
    Eigen::MatrixX3d pos(static_cast<Eigen::Index>(patches.size()), 3);
    for (size_t i = 0; i < patches.size(); ++i) {
        pos.row(static_cast<Eigen::Index>(i)) = patches[i].seed_position();
    }
    return pos;
}

PatchGroup group_similar(const std::vector<PatchMatrix>& patches,
                         int reference_index,
                         const GroupingParams& params) {
    check_reference(patches, reference_index);
    const Eigen::RowVector3d ref_seed = patches[static_cast<size_t>(reference_index)].seed_position();

    // (squared seed distance, patch index), ascending; the reference excluded.
    std::vector<std::pair<double, int>> order;
    order.reserve(patches.size());
    for (size_t i = 0; i < patches.size(); ++i) {
        if (static_cast<int>(i) == reference_index) continue;
        const double d2 = (patches[i].seed_position() - ref_seed).squaredNorm();
        order.emplace_back(d2, static_cast<int>(i));
    }
    std::sort(order.begin(), order.end());

    std::vector<int> candidates;
    const size_t take = std::min(order.size(), static_cast<size_t>(params.n_reg));
    candidates.reserve(take);
    for (size_t i = 0; i < take; ++i) candidates.push_back(order[i].second);
    return form_group(patches, reference_index, candidates, params);
}

PatchGroup group_similar(const std::vector<PatchMatrix>& patches,
                         const SpatialIndex& seed_index,
                         int reference_index,
                         const GroupingParams& params) {
    check_reference(patches, reference_index);
    const int total = static_cast<int>(patches.size());
    const int take = std::min(total, params.n_reg + 1);
    const std::vector<Neighbor> nn = seed_index.knn(
        patches[static_cast<size_t>(reference_index)].seed_position().transpose(), take);

    std::vector<int> candidates;
    candidates.reserve(static_cast<size_t>(params.n_reg));
    for (const Neighbor& n : nn) {
        if (n.index == reference_index) continue;
        if (static_cast<int>(candidates.size()) == params.n_reg) break;
        candidates.push_back(n.index);
    }
    return form_group(patches, reference_index, candidates, params);
}

} // namespace tude
