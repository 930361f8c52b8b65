#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "nodegen/vec.hpp"

namespace nodegen {

// Result of a nearest-neighbor query: index into insertion order, squared
// distance. Ties are broken toward the lowest insertion index.
struct NearestHit {
    std::int64_t index = -1;
    double dist2 = std::numeric_limits<double>::infinity();

    bool found() const { return index >= 0; }
    double distance() const { return std::sqrt(dist2); }
};

// Incremental k-d tree. `init` bulk-builds a balanced tree (median splits);
// later insertions descend without rebalancing, which keeps every operation
// O(log N) on average for the advancing-front workloads used here.
// Single writer; concurrent reads are safe between insertions.
template <std::size_t dim>
class KdTree {
  public:
    KdTree() = default;

    explicit KdTree(const std::vector<Vec<dim>>& points) { init(points); }

    void init(const std::vector<Vec<dim>>& points) {
        nodes_.clear();
        root_ = -1;
        nodes_.reserve(points.size());
        for (std::size_t i = 0; i < points.size(); ++i)
            nodes_.push_back(Node{points[i], -1, -1, 0, static_cast<std::int64_t>(i)});
        std::vector<std::int32_t> order(points.size());
        std::iota(order.begin(), order.end(), 0);
        root_ = build(order.data(), static_cast<std::int32_t>(order.size()), 0);
    }

    std::size_t size() const { return nodes_.size(); }

    void insert(const Vec<dim>& p) {
        std::int32_t self = static_cast<std::int32_t>(nodes_.size());
        std::int64_t id = static_cast<std::int64_t>(nodes_.size());
        if (root_ < 0) {
            nodes_.push_back(Node{p, -1, -1, 0, id});
            root_ = self;
            return;
        }
        std::int32_t cur = root_;
        while (true) {
            Node& n = nodes_[cur];
            std::int32_t& child = p[n.axis] < n.pt[n.axis] ? n.left : n.right;
            if (child < 0) {
                std::int8_t axis = static_cast<std::int8_t>((n.axis + 1) % dim);
                child = self;
                nodes_.push_back(Node{p, -1, -1, axis, id});
                return;
            }
            cur = child;
        }
    }

    const Vec<dim>& point(std::int64_t insertion_index) const {
        return nodes_[static_cast<std::size_t>(insertion_index)].pt;
    }

    NearestHit nearest(const Vec<dim>& q) const {
        if (root_ < 0) throw std::logic_error("KdTree::nearest: empty tree");
        NearestHit best;
        search(root_, q, best);
        return best;
    }

    // Nearest point at squared distance <= bound_d2, or a not-found hit. The
    // bound seeds the pruning, so forest searches after the first tree are
    // cheap.
    NearestHit nearest_bounded(const Vec<dim>& q, double bound_d2) const {
        NearestHit best;
        best.dist2 = bound_d2;
        best.index = std::numeric_limits<std::int64_t>::max();  // any real hit at the bound wins
        if (root_ >= 0) search(root_, q, best);
        if (best.index == std::numeric_limits<std::int64_t>::max()) return NearestHit{};
        return best;
    }

    // All stored points within radius r of q (inclusive), unordered.
    std::vector<NearestHit> radius_search(const Vec<dim>& q, double r) const {
        std::vector<NearestHit> out;
        if (root_ >= 0) search_radius(root_, q, r * r, out);
        return out;
    }

    // The k nearest points to q, sorted by (distance, insertion index).
    // If q itself is stored, it is included (callers exclude it when needed).
    std::vector<NearestHit> knn(const Vec<dim>& q, std::size_t k) const {
        if (root_ < 0) throw std::logic_error("KdTree::knn: empty tree");
        KnnHeap heap(k);
        search_knn(root_, q, heap);
        std::vector<NearestHit> out(heap.items.begin(), heap.items.end());
        std::sort(out.begin(), out.end(), [](const NearestHit& a, const NearestHit& b) {
            return a.dist2 != b.dist2 ? a.dist2 < b.dist2 : a.index < b.index;
        });
        return out;
    }

  private:
    struct Node {
        Vec<dim> pt;
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::int8_t axis = 0;
        std::int64_t id = 0;  // insertion index, also tie-break key
    };

    struct KnnHeap {
        explicit KnnHeap(std::size_t k) : cap(k) {}
        std::size_t cap;
        std::vector<NearestHit> items;  // max-heap on (dist2, -index)

        static bool worse(const NearestHit& a, const NearestHit& b) {
            return a.dist2 != b.dist2 ? a.dist2 < b.dist2 : a.index > b.index;
        }
        double bound() const {
            return items.size() < cap ? std::numeric_limits<double>::infinity() : items.front().dist2;
        }
        void offer(const NearestHit& h) {
            if (items.size() < cap) {
                items.push_back(h);
                std::push_heap(items.begin(), items.end(), worse);
            } else if (worse(h, items.front())) {
                std::pop_heap(items.begin(), items.end(), worse);
                items.back() = h;
                std::push_heap(items.begin(), items.end(), worse);
            }
        }
    };

    std::vector<Node> nodes_;
    std::int32_t root_ = -1;

    std::int32_t build(std::int32_t* ids, std::int32_t count, int depth) {
        if (count <= 0) return -1;
        std::int8_t axis = static_cast<std::int8_t>(depth % dim);
        std::int32_t mid = count / 2;
        std::nth_element(ids, ids + mid, ids + count, [&](std::int32_t a, std::int32_t b) {
            return nodes_[a].pt[axis] != nodes_[b].pt[axis] ? nodes_[a].pt[axis] < nodes_[b].pt[axis]
                                                           : nodes_[a].id < nodes_[b].id;
        });
        std::int32_t n = ids[mid];
        nodes_[n].axis = axis;
        nodes_[n].left = build(ids, mid, depth + 1);
        nodes_[n].right = build(ids + mid + 1, count - mid - 1, depth + 1);
        return n;
    }

    void search(std::int32_t cur, const Vec<dim>& q, NearestHit& best) const {
        const Node& n = nodes_[cur];
        double d2 = dist2(n.pt, q);
        if (d2 < best.dist2 || (d2 == best.dist2 && n.id < best.index)) best = {n.id, d2};
        double delta = q[n.axis] - n.pt[n.axis];
        std::int32_t near = delta < 0 ? n.left : n.right;
        std::int32_t far = delta < 0 ? n.right : n.left;
        if (near >= 0) search(near, q, best);
        if (far >= 0 && delta * delta <= best.dist2) search(far, q, best);
    }

    void search_radius(std::int32_t cur, const Vec<dim>& q, double r2,
                       std::vector<NearestHit>& out) const {
        const Node& n = nodes_[cur];
        double d2 = dist2(n.pt, q);
        if (d2 <= r2) out.push_back({n.id, d2});
        double delta = q[n.axis] - n.pt[n.axis];
        std::int32_t near = delta < 0 ? n.left : n.right;
        std::int32_t far = delta < 0 ? n.right : n.left;
        if (near >= 0) search_radius(near, q, r2, out);
        if (far >= 0 && delta * delta <= r2) search_radius(far, q, r2, out);
    }

    void search_knn(std::int32_t cur, const Vec<dim>& q, KnnHeap& heap) const {
        const Node& n = nodes_[cur];
        heap.offer({n.id, dist2(n.pt, q)});
        double delta = q[n.axis] - n.pt[n.axis];
        std::int32_t near = delta < 0 ? n.left : n.right;
        std::int32_t far = delta < 0 ? n.right : n.left;
        if (near >= 0) search_knn(near, q, heap);
        if (far >= 0 && delta * delta <= heap.bound()) search_knn(far, q, heap);
    }
};

// Incremental nearest-neighbor structure for advancing-front insertion
// orders: a scapegoat-balanced k-d tree. Plain insertion into a k-d tree
// degrades badly when points arrive front-ordered; here any subtree whose
// weight balance tips past alpha is rebuilt, which keeps the height within
// log(n)/log(1/alpha) and every query O(log n). Results are exact and match
// the static tree, including tie-breaking by insertion order.
template <std::size_t dim>
class DynamicKdTree {
  public:
    DynamicKdTree() = default;

    void init(const std::vector<Vec<dim>>& points) {
        nodes_.clear();
        nodes_.reserve(points.size());
        for (std::size_t i = 0; i < points.size(); ++i)
            nodes_.push_back(Node{points[i], -1, -1, 0, static_cast<std::int64_t>(i), 1});
        std::vector<std::int32_t> order(points.size());
        std::iota(order.begin(), order.end(), 0);
        root_ = rebuild(order.data(), static_cast<std::int32_t>(order.size()), 0);
    }

    std::size_t size() const { return nodes_.size(); }

    const Vec<dim>& point(std::int64_t insertion_index) const {
        return nodes_[static_cast<std::size_t>(insertion_index)].pt;
    }

    void insert(const Vec<dim>& p) {
        std::int32_t self = static_cast<std::int32_t>(nodes_.size());
        std::int64_t id = static_cast<std::int64_t>(nodes_.size());
        if (root_ < 0) {
            nodes_.push_back(Node{p, -1, -1, 0, id, 1});
            root_ = self;
            return;
        }
        path_.clear();
        std::int32_t cur = root_;
        while (true) {
            path_.push_back(cur);
            Node& n = nodes_[cur];
            ++n.size;
            std::int32_t& child = p[n.axis] < n.pt[n.axis] ? n.left : n.right;
            if (child < 0) {
                child = self;
                nodes_.push_back(
                    Node{p, -1, -1, static_cast<std::int8_t>((n.axis + 1) % dim), id, 1});
                break;
            }
            cur = child;
        }
        // depth limit breached: rebuild the highest alpha-unbalanced subtree
        double limit = std::log(static_cast<double>(nodes_.size())) / kLogInvAlpha;
        if (static_cast<double>(path_.size()) > limit + 1.0) {
            for (std::size_t d = 0; d < path_.size(); ++d) {
                const Node& n = nodes_[path_[d]];
                std::int32_t ls = n.left >= 0 ? nodes_[n.left].size : 0;
                std::int32_t rs = n.right >= 0 ? nodes_[n.right].size : 0;
                if (std::max(ls, rs) > kAlpha * n.size) {
                    rebuild_at(d);
                    return;
                }
            }
        }
    }

    NearestHit nearest(const Vec<dim>& q) const {
        if (root_ < 0) throw std::logic_error("DynamicKdTree::nearest: empty index");
        NearestHit best;
        search(root_, q, best);
        return best;
    }

  private:
    static constexpr double kAlpha = 0.65;
    inline static const double kLogInvAlpha = std::log(1.0 / kAlpha);

    struct Node {
        Vec<dim> pt;
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::int8_t axis = 0;
        std::int64_t id = 0;    // insertion index, also tie-break key
        std::int32_t size = 1;  // subtree weight
    };

    std::vector<Node> nodes_;
    std::int32_t root_ = -1;
    std::vector<std::int32_t> path_;     // insertion descent, reused
    std::vector<std::int32_t> scratch_;  // subtree collection, reused

    void collect(std::int32_t cur) {
        if (cur < 0) return;
        scratch_.push_back(cur);
        collect(nodes_[cur].left);
        collect(nodes_[cur].right);
    }

    std::int32_t rebuild(std::int32_t* ids, std::int32_t count, int depth) {
        if (count <= 0) return -1;
        std::int8_t axis = static_cast<std::int8_t>(depth % dim);
        std::int32_t mid = count / 2;
        std::nth_element(ids, ids + mid, ids + count, [&](std::int32_t a, std::int32_t b) {
            return nodes_[a].pt[axis] != nodes_[b].pt[axis] ? nodes_[a].pt[axis] < nodes_[b].pt[axis]
                                                            : nodes_[a].id < nodes_[b].id;
        });
        std::int32_t n = ids[mid];
        nodes_[n].axis = axis;
        nodes_[n].size = count;
        nodes_[n].left = rebuild(ids, mid, depth + 1);
        nodes_[n].right = rebuild(ids + mid + 1, count - mid - 1, depth + 1);
        return n;
    }

    void rebuild_at(std::size_t path_depth) {
        std::int32_t subtree = path_[path_depth];
        scratch_.clear();
        collect(subtree);
        std::int32_t fresh =
            rebuild(scratch_.data(), static_cast<std::int32_t>(scratch_.size()),
                    static_cast<int>(path_depth));
        if (path_depth == 0) {
            root_ = fresh;
        } else {
            Node& parent = nodes_[path_[path_depth - 1]];
            (parent.left == subtree ? parent.left : parent.right) = fresh;
        }
    }

    void search(std::int32_t cur, const Vec<dim>& q, NearestHit& best) const {
        const Node& n = nodes_[cur];
        double d2 = dist2(n.pt, q);
        if (d2 < best.dist2 || (d2 == best.dist2 && n.id < best.index)) best = {n.id, d2};
        double delta = q[n.axis] - n.pt[n.axis];
        std::int32_t near = delta < 0 ? n.left : n.right;
        std::int32_t far = delta < 0 ? n.right : n.left;
        if (near >= 0) search(near, q, best);
        if (far >= 0 && delta * delta <= best.dist2) search(far, q, best);
    }
};

// Uniform background grid with cell size h/sqrt(d), the structure of choice
// for constant spacing. Cells hold an intrusive linked list of point indices,
// so moderate spacing variability (several points per cell) is fine.
// Nearest queries expand cell rings until no closer point can exist, so
// results are exact, matching the k-d tree on identical input.
// A hash map of occupied cells would drop the dense allocation and pay off
// for very irregular domains; the dense array wins for the box-like covers
// used here.
template <std::size_t dim>
class BackgroundGrid {
  public:
    // Covers [lo, hi] inflated by `margin` on each side (boundary points of a
    // domain land exactly on the box walls).
    BackgroundGrid(const Vec<dim>& lo, const Vec<dim>& hi, double h, double margin = 0)
        : cell_(h / std::sqrt(static_cast<double>(dim))) {
        if (!(h > 0)) throw std::invalid_argument("BackgroundGrid: h must be > 0");
        std::size_t total = 1;
        for (std::size_t i = 0; i < dim; ++i) {
            lo_[i] = lo[i] - margin;
            double extent = (hi[i] + margin) - lo_[i];
            dims_[i] = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(extent / cell_)) + 1);
            total *= static_cast<std::size_t>(dims_[i]);
        }
        heads_.assign(total, -1);
    }

    void init(const std::vector<Vec<dim>>& points) {
        std::fill(heads_.begin(), heads_.end(), -1);
        next_.clear();
        points_.clear();
        for (const Vec<dim>& p : points) insert(p);
    }

    double cell_size() const { return cell_; }
    std::size_t cell_count() const { return heads_.size(); }
    std::size_t size() const { return points_.size(); }
    const Vec<dim>& point(std::int64_t insertion_index) const {
        return points_[static_cast<std::size_t>(insertion_index)];
    }

    void insert(const Vec<dim>& p) {
        for (std::size_t i = 0; i < dim; ++i) {
            double rel = (p[i] - lo_[i]) / cell_;
            if (rel < -0.5 || rel > static_cast<double>(dims_[i]) + 0.5) {
                std::ostringstream os;
                os << "BackgroundGrid::insert: point " << p << " outside covered box (axis " << i << ")";
                throw std::out_of_range(os.str());
            }
        }
        std::int32_t id = static_cast<std::int32_t>(points_.size());
        points_.push_back(p);
        std::size_t c = cell_of(p);
        next_.push_back(heads_[c]);
        heads_[c] = id;
    }

    // Exact nearest stored point; `exclude` skips one insertion index (for
    // self-excluding queries).
    NearestHit nearest(const Vec<dim>& q, std::int64_t exclude = -1) const {
        if (points_.empty()) throw std::logic_error("BackgroundGrid::nearest: empty grid");
        std::array<std::int64_t, dim> base = index_of(q);
        NearestHit best;
        std::int64_t max_ring = 0;
        for (std::size_t i = 0; i < dim; ++i) max_ring = std::max(max_ring, dims_[i]);
        for (std::int64_t ring = 0; ring <= max_ring; ++ring) {
            // Points in cells with Chebyshev index distance >= ring lie at
            // Euclidean distance >= (ring-1)*cell from q; safe to stop then.
            double ring_bound = static_cast<double>(ring - 1) * cell_;
            if (best.found() && ring >= 1 && best.dist2 <= ring_bound * ring_bound) break;
            scan_ring(base, ring, q, exclude, best);
        }
        return best;
    }

  private:
    double cell_;
    Vec<dim> lo_{};
    std::array<std::int64_t, dim> dims_{};
    std::vector<std::int32_t> heads_;
    std::vector<std::int32_t> next_;
    std::vector<Vec<dim>> points_;

    std::array<std::int64_t, dim> index_of(const Vec<dim>& p) const {
        std::array<std::int64_t, dim> idx;
        for (std::size_t i = 0; i < dim; ++i) {
            std::int64_t v = static_cast<std::int64_t>(std::floor((p[i] - lo_[i]) / cell_));
            idx[i] = std::clamp<std::int64_t>(v, 0, dims_[i] - 1);
        }
        return idx;
    }

    std::size_t flatten(const std::array<std::int64_t, dim>& idx) const {
        std::size_t f = 0;
        for (std::size_t i = 0; i < dim; ++i) f = f * static_cast<std::size_t>(dims_[i]) + static_cast<std::size_t>(idx[i]);
        return f;
    }

    std::size_t cell_of(const Vec<dim>& p) const { return flatten(index_of(p)); }

    void scan_cell(const std::array<std::int64_t, dim>& idx, const Vec<dim>& q,
                   std::int64_t exclude, NearestHit& best) const {
        for (std::int32_t it = heads_[flatten(idx)]; it >= 0; it = next_[it]) {
            if (it == exclude) continue;
            double d2 = dist2(points_[it], q);
            if (d2 < best.dist2 || (d2 == best.dist2 && it < best.index)) best = {it, d2};
        }
    }

    // Visits all cells at Chebyshev distance exactly `ring` from base.
    void scan_ring(const std::array<std::int64_t, dim>& base, std::int64_t ring, const Vec<dim>& q,
                   std::int64_t exclude, NearestHit& best) const {
        std::array<std::int64_t, dim> idx;
        scan_ring_rec(base, ring, 0, false, idx, q, exclude, best);
    }

    void scan_ring_rec(const std::array<std::int64_t, dim>& base, std::int64_t ring, int axis,
                       bool pinned, std::array<std::int64_t, dim>& idx, const Vec<dim>& q,
                       std::int64_t exclude, NearestHit& best) const {
        if (axis == dim) {
            if (pinned || ring == 0) scan_cell(idx, q, exclude, best);
            return;
        }
        std::int64_t lo = std::max<std::int64_t>(base[axis] - ring, 0);
        std::int64_t hi = std::min<std::int64_t>(base[axis] + ring, dims_[axis] - 1);
        if (axis == dim - 1 && !pinned && ring > 0) {
            // last free axis must sit on the ring face
            for (std::int64_t v : {base[axis] - ring, base[axis] + ring}) {
                if (v < lo || v > hi) continue;
                idx[axis] = v;
                scan_ring_rec(base, ring, axis + 1, true, idx, q, exclude, best);
            }
            return;
        }
        for (std::int64_t v = lo; v <= hi; ++v) {
            idx[axis] = v;
            bool on_face = (v == base[axis] - ring) || (v == base[axis] + ring);
            scan_ring_rec(base, ring, axis + 1, pinned || on_face, idx, q, exclude, best);
        }
    }
};

}  // namespace nodegen
