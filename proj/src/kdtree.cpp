#include "tude/kdtree.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace tude {

SpatialIndex::SpatialIndex(const PointCloud& cloud) {
    if (cloud.empty()) throw std::invalid_argument("SpatialIndex: empty cloud");
    pts_.reserve(cloud.points.size());
    for (const Point3& p : cloud.points) pts_.push_back(p.vec());
    order_.resize(pts_.size());
    std::iota(order_.begin(), order_.end(), 0);
    build(0, static_cast<int>(order_.size()), 0);
}

SpatialIndex::SpatialIndex(const Eigen::MatrixX3d& points) {
    if (points.rows() == 0) throw std::invalid_argument("SpatialIndex: empty point set");
    pts_.reserve(static_cast<size_t>(points.rows()));
    for (Eigen::Index i = 0; i < points.rows(); ++i) pts_.push_back(points.row(i).transpose());
    order_.resize(pts_.size());
    std::iota(order_.begin(), order_.end(), 0);
    build(0, static_cast<int>(order_.size()), 0);
}

void SpatialIndex::build(int lo, int hi, int depth) {
    if (hi - lo <= 1) return;
    const int axis = depth % 3;
    const int mid = lo + (hi - lo) / 2;
    std::nth_element(order_.begin() + lo, order_.begin() + mid, order_.begin() + hi,
                     [&](int a, int b) {
                         const double ca = pts_[static_cast<size_t>(a)][axis];
                         const double cb = pts_[static_cast<size_t>(b)][axis];
                         return ca != cb ? ca < cb : a < b;
                     });
    build(lo, mid, depth + 1);
    build(mid + 1, hi, depth + 1);
}

void SpatialIndex::search(int lo, int hi, int depth, const Eigen::Vector3d& q, int k,
                          std::vector<Candidate>& heap) const {
    if (lo >= hi) return;
    const int mid = lo + (hi - lo) / 2;
    const int idx = order_[static_cast<size_t>(mid)];
    const Eigen::Vector3d& p = pts_[static_cast<size_t>(idx)];

    const Candidate cand{(p - q).squaredNorm(), idx};
    if (static_cast<int>(heap.size()) < k) {
        heap.push_back(cand);
        std::push_heap(heap.begin(), heap.end());
    } else if (cand < heap.front()) {
        std::pop_heap(heap.begin(), heap.end());
        heap.back() = cand;
        std::push_heap(heap.begin(), heap.end());
    }

    const int axis = depth % 3;
    const double delta = q[axis] - p[axis];
    const int near_lo = delta <= 0 ? lo : mid + 1;
    const int near_hi = delta <= 0 ? mid : hi;
    const int far_lo = delta <= 0 ? mid + 1 : lo;
    const int far_hi = delta <= 0 ? hi : mid;

    search(near_lo, near_hi, depth + 1, q, k, heap);
    // Equal-distance points beyond the splitting plane may still win on the
    // index tie-break, so only prune on a strictly larger plane distance.
    if (static_cast<int>(heap.size()) < k || delta * delta <= heap.front().dist2) {
        search(far_lo, far_hi, depth + 1, q, k, heap);
    }
}

std::vector<Neighbor> SpatialIndex::knn(const Eigen::Vector3d& query, int k) const {
    if (k < 1) throw std::invalid_argument("knn: k must be positive");
    if (k > size()) {
        throw std::invalid_argument("knn: k=" + std::to_string(k) + " exceeds point count " +
                                    std::to_string(size()));
    }
    std::vector<Candidate> heap;
    heap.reserve(static_cast<size_t>(k));
    search(0, static_cast<int>(order_.size()), 0, query, k, heap);
    std::sort(heap.begin(), heap.end());
    std::vector<Neighbor> out;
    out.reserve(heap.size());
    for (const Candidate& c : heap) out.push_back({c.index, std::sqrt(c.dist2)});
    return out;
}

std::vector<Neighbor> SpatialIndex::knn(const Point3& query, int k) const {
    return knn(query.vec(), k);
}

} // namespace tude
