#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "nodegen/delaunay.hpp"
#include "nodegen/domain.hpp"
#include "nodegen/fill_pnp.hpp"
#include "nodegen/spatial.hpp"
#include "nodegen/vec.hpp"

namespace nodegen {

// Per-node and aggregate statistics of distances to the c nearest neighbors,
// restricted to nodes at least `margin` away from the boundary node set.
struct NeighborStats {
    std::vector<std::size_t> node_index;  // interior nodes the rows refer to
    std::vector<double> mean_dist;        // per node: mean distance to c nearest
    std::vector<double> min_dist;
    std::vector<double> max_dist;
    double mean = 0;         // mean of mean_dist
    double stddev = 0;       // population std of mean_dist
    double mean_spread = 0;  // mean of (max_dist - min_dist)
};

struct Histogram {
    std::vector<double> edges;        // nbins + 1
    std::vector<std::size_t> counts;  // nbins
    std::size_t below = 0, above = 0;
    std::size_t total() const {
        std::size_t t = below + above;
        for (std::size_t c : counts) t += c;
        return t;
    }
};

// Interior Voronoi vertices and their empty-circle diameters
// s_j = 2 min_i |v_j - p_i|.
struct HoleReport {
    std::vector<Vec<2>> vertices;
    std::vector<double> diameters;
    double min = 0, mean = 0, max = 0;
};

struct EmptyDiskReport {
    bool pass = false;
    double worst_ratio = std::numeric_limits<double>::infinity();
    std::size_t worst_j = 0;  // offending later node
    std::size_t worst_k = 0;  // offending earlier node
};

struct MinSpacingReport {
    double distance = std::numeric_limits<double>::infinity();
    std::size_t i = 0, j = 0;
};

namespace detail {

// Indices of nodes at least margin away from the boundary node set; with no
// boundary every node is interior.
template <std::size_t dim>
std::vector<std::size_t> interior_indices(const std::vector<Vec<dim>>& nodes,
                                          const std::vector<Vec<dim>>& boundary, double margin) {
    std::vector<std::size_t> interior;
    if (boundary.empty() || margin <= 0) {
        interior.resize(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) interior[i] = i;
        return interior;
    }
    KdTree<dim> btree(boundary);
    double m2 = margin * margin;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (btree.nearest(nodes[i]).dist2 >= m2) interior.push_back(i);
    return interior;
}

// Distances from node `idx` to its c nearest neighbors (self excluded),
// ascending.
template <std::size_t dim>
void knn_distances(const KdTree<dim>& tree, const std::vector<Vec<dim>>& nodes, std::size_t idx,
                   int c, std::vector<double>& out) {
    out.clear();
    auto hits = tree.knn(nodes[idx], static_cast<std::size_t>(c) + 1);
    for (const NearestHit& h : hits) {
        if (static_cast<std::size_t>(h.index) == idx) continue;
        out.push_back(std::sqrt(h.dist2));
        if (out.size() == static_cast<std::size_t>(c)) break;
    }
}

inline void finalize_neighbor_stats(NeighborStats& s) {
    double sum = 0, spread = 0;
    for (std::size_t i = 0; i < s.mean_dist.size(); ++i) {
        sum += s.mean_dist[i];
        spread += s.max_dist[i] - s.min_dist[i];
    }
    double n = static_cast<double>(s.mean_dist.size());
    s.mean = sum / n;
    double var = 0;
    for (double d : s.mean_dist) var += (d - s.mean) * (d - s.mean);
    s.stddev = std::sqrt(var / n);
    s.mean_spread = spread / n;
}

}  // namespace detail

// OpenMP-parallel kernel; per-node rows are computed independently and the
// aggregates serially, so results do not depend on the thread count.
// A serial reference lives in nodegen::serial.
template <std::size_t dim>
NeighborStats neighbor_stats(const std::vector<Vec<dim>>& nodes, int c,
                             const std::vector<Vec<dim>>& boundary, double margin) {
    if (c < 1) throw std::invalid_argument("neighbor_stats: c must be >= 1");
    NeighborStats s;
    s.node_index = detail::interior_indices(nodes, boundary, margin);
    if (s.node_index.size() < static_cast<std::size_t>(c) + 1)
        throw std::invalid_argument("neighbor_stats: fewer than c + 1 interior nodes");
    if (nodes.size() < static_cast<std::size_t>(c) + 1)
        throw std::invalid_argument("neighbor_stats: fewer than c + 1 nodes");

    KdTree<dim> tree(nodes);
    std::size_t m = s.node_index.size();
    s.mean_dist.resize(m);
    s.min_dist.resize(m);
    s.max_dist.resize(m);
#pragma omp parallel
    {
        std::vector<double> d;
#pragma omp for schedule(static)
        for (std::int64_t r = 0; r < static_cast<std::int64_t>(m); ++r) {
            detail::knn_distances(tree, nodes, s.node_index[r], c, d);
            double sum = 0;
            for (double v : d) sum += v;
            s.mean_dist[r] = sum / static_cast<double>(d.size());
            s.min_dist[r] = d.front();
            s.max_dist[r] = d.back();
        }
    }
    detail::finalize_neighbor_stats(s);
    return s;
}

// Histogram of the c nearest-neighbor distances of interior nodes. `lo`/`hi`
// <= 0 auto-range to [0, max distance]; samples outside the range land in
// `below`/`above`.
template <std::size_t dim>
Histogram distance_histogram(const std::vector<Vec<dim>>& nodes, int c, int nbins,
                             double lo = 0, double hi = 0,
                             const std::vector<Vec<dim>>& boundary = {}, double margin = 0) {
    if (nbins < 1) throw std::invalid_argument("distance_histogram: bins must be >= 1");
    if (c < 1) throw std::invalid_argument("distance_histogram: c must be >= 1");
    std::vector<std::size_t> interior = detail::interior_indices(nodes, boundary, margin);
    if (nodes.size() < static_cast<std::size_t>(c) + 1)
        throw std::invalid_argument("distance_histogram: fewer than c + 1 nodes");

    KdTree<dim> tree(nodes);
    std::vector<double> all(interior.size() * static_cast<std::size_t>(c),
                            std::numeric_limits<double>::quiet_NaN());
#pragma omp parallel
    {
        std::vector<double> d;
#pragma omp for schedule(static)
        for (std::int64_t r = 0; r < static_cast<std::int64_t>(interior.size()); ++r) {
            detail::knn_distances(tree, nodes, interior[r], c, d);
            for (std::size_t j = 0; j < d.size(); ++j) all[r * c + j] = d[j];
        }
    }
    all.erase(std::remove_if(all.begin(), all.end(), [](double v) { return std::isnan(v); }),
              all.end());

    Histogram hist;
    if (!(hi > lo)) {
        lo = 0;
        hi = all.empty() ? 1.0 : *std::max_element(all.begin(), all.end()) * (1 + 1e-12);
    }
    hist.edges.resize(nbins + 1);
    for (int b = 0; b <= nbins; ++b)
        hist.edges[b] = lo + (hi - lo) * static_cast<double>(b) / nbins;
    hist.counts.assign(nbins, 0);
    for (double v : all) {
        if (v < lo) {
            ++hist.below;
        } else if (v >= hi) {
            ++hist.above;
        } else {
            int b = static_cast<int>((v - lo) / (hi - lo) * nbins);
            ++hist.counts[std::min(b, nbins - 1)];
        }
    }
    return hist;
}

// Voronoi-vertex hole diameters of a 2-D node set: Delaunay circumcenters
// inside the domain, each with twice the distance to its nearest node.
// Coincident circumcenters (cocircular configurations) are merged.
inline HoleReport hole_sizes_2d(const std::vector<Vec<2>>& nodes, const Domain<2>& domain) {
    if (nodes.size() < 3) throw std::invalid_argument("hole_sizes_2d: need at least 3 nodes");
    std::vector<Triangle> tris = delaunay_triangulate(nodes);

    double scale = std::max(domain.hi[0] - domain.lo[0], domain.hi[1] - domain.lo[1]);
    KdTree<2> tree(nodes);
    HoleReport report;
    std::vector<Vec<2>> raw;
    for (const Triangle& t : tris) {
        Vec<2> v = circumcenter(nodes[t.a], nodes[t.b], nodes[t.c]);
        if (!std::isfinite(v[0]) || !std::isfinite(v[1])) continue;
        if (!domain.contains(v)) continue;
        raw.push_back(v);
    }
    std::sort(raw.begin(), raw.end(), [](const Vec<2>& a, const Vec<2>& b) {
        return a[0] != b[0] ? a[0] < b[0] : a[1] < b[1];
    });
    for (const Vec<2>& v : raw) {
        if (!report.vertices.empty() && dist2(report.vertices.back(), v) < 1e-18 * scale * scale)
            continue;
        report.vertices.push_back(v);
        report.diameters.push_back(2.0 * tree.nearest(v).distance());
    }
    if (report.diameters.empty()) return report;
    double sum = 0;
    report.min = report.max = report.diameters[0];
    for (double s : report.diameters) {
        sum += s;
        report.min = std::min(report.min, s);
        report.max = std::max(report.max, s);
    }
    report.mean = sum / static_cast<double>(report.diameters.size());
    return report;
}

// Exhaustive check of the minimal spacing inequality
//   |p_k - p_j| >= (1 - eps) h(p_beta(j))   for every non-seed j and k < j.
template <std::size_t dim>
EmptyDiskReport verify_empty_disk(const FillResult<dim>& result, const SpacingField<dim>& h,
                                  double eps = 1e-10) {
    if (result.predecessor.size() != result.nodes.size())
        throw std::invalid_argument("verify_empty_disk: result carries no predecessor function");
    const auto& nodes = result.nodes;
    EmptyDiskReport report;
    report.worst_ratio = std::numeric_limits<double>::infinity();

#pragma omp parallel
    {
        EmptyDiskReport local = report;
#pragma omp for schedule(dynamic, 64)
        for (std::int64_t j = static_cast<std::int64_t>(result.seed_count);
             j < static_cast<std::int64_t>(nodes.size()); ++j) {
            std::int64_t pred = result.predecessor[j];
            double r = h(nodes[static_cast<std::size_t>(pred)]);
            for (std::int64_t k = 0; k < j; ++k) {
                double ratio = dist(nodes[k], nodes[j]) / r;
                if (ratio < local.worst_ratio) {
                    local.worst_ratio = ratio;
                    local.worst_j = static_cast<std::size_t>(j);
                    local.worst_k = static_cast<std::size_t>(k);
                }
            }
        }
#pragma omp critical
        {
            if (local.worst_ratio < report.worst_ratio ||
                (local.worst_ratio == report.worst_ratio && local.worst_j < report.worst_j)) {
                report.worst_ratio = local.worst_ratio;
                report.worst_j = local.worst_j;
                report.worst_k = local.worst_k;
            }
        }
    }
    report.pass = report.worst_ratio >= 1.0 - eps;
    return report;
}

// Exact minimum over all node pairs. Brute force up to 10^4 nodes,
// grid-accelerated per-node nearest above.
template <std::size_t dim>
MinSpacingReport min_pairwise_distance(const std::vector<Vec<dim>>& nodes) {
    if (nodes.size() < 2) throw std::invalid_argument("min_pairwise_distance: need >= 2 nodes");
    MinSpacingReport best;
    double best_d2 = std::numeric_limits<double>::infinity();

    if (nodes.size() <= 10'000) {
#pragma omp parallel
        {
            MinSpacingReport local;
            double local_d2 = std::numeric_limits<double>::infinity();
#pragma omp for schedule(dynamic, 32)
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(nodes.size()); ++i) {
                for (std::size_t j = i + 1; j < nodes.size(); ++j) {
                    double d2 = dist2(nodes[i], nodes[j]);
                    if (d2 < local_d2) {
                        local_d2 = d2;
                        local.i = static_cast<std::size_t>(i);
                        local.j = j;
                    }
                }
            }
#pragma omp critical
            {
                if (local_d2 < best_d2 || (local_d2 == best_d2 && local.i < best.i)) {
                    best_d2 = local_d2;
                    best.i = local.i;
                    best.j = local.j;
                }
            }
        }
    } else {
        Vec<dim> lo = nodes[0], hi = nodes[0];
        for (const Vec<dim>& p : nodes)
            for (std::size_t k = 0; k < dim; ++k) {
                lo[k] = std::min(lo[k], p[k]);
                hi[k] = std::max(hi[k], p[k]);
            }
        double volume = 1;
        for (std::size_t k = 0; k < dim; ++k) volume *= std::max(hi[k] - lo[k], 1e-12);
        double cell = std::pow(volume / static_cast<double>(nodes.size()), 1.0 / dim);
        BackgroundGrid<dim> grid(lo, hi, cell * std::sqrt(static_cast<double>(dim)), cell);
        for (const Vec<dim>& p : nodes) grid.insert(p);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            NearestHit hit = grid.nearest(nodes[i], static_cast<std::int64_t>(i));
            if (hit.dist2 < best_d2 ||
                (hit.dist2 == best_d2 && std::min<std::size_t>(i, hit.index) < best.i)) {
                best_d2 = hit.dist2;
                best.i = std::min<std::size_t>(i, static_cast<std::size_t>(hit.index));
                best.j = std::max<std::size_t>(i, static_cast<std::size_t>(hit.index));
            }
        }
    }
    best.distance = std::sqrt(best_d2);
    return best;
}

// Serial reference implementations, kept for testing the parallel kernels.
namespace serial {

template <std::size_t dim>
NeighborStats neighbor_stats(const std::vector<Vec<dim>>& nodes, int c,
                             const std::vector<Vec<dim>>& boundary, double margin) {
    if (c < 1) throw std::invalid_argument("neighbor_stats: c must be >= 1");
    NeighborStats s;
    s.node_index = detail::interior_indices(nodes, boundary, margin);
    if (s.node_index.size() < static_cast<std::size_t>(c) + 1)
        throw std::invalid_argument("neighbor_stats: fewer than c + 1 interior nodes");
    KdTree<dim> tree(nodes);
    std::vector<double> d;
    for (std::size_t idx : s.node_index) {
        detail::knn_distances(tree, nodes, idx, c, d);
        double sum = 0;
        for (double v : d) sum += v;
        s.mean_dist.push_back(sum / static_cast<double>(d.size()));
        s.min_dist.push_back(d.front());
        s.max_dist.push_back(d.back());
    }
    detail::finalize_neighbor_stats(s);
    return s;
}

template <std::size_t dim>
MinSpacingReport min_pairwise_distance(const std::vector<Vec<dim>>& nodes) {
    if (nodes.size() < 2) throw std::invalid_argument("min_pairwise_distance: need >= 2 nodes");
    MinSpacingReport best;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            double d2 = dist2(nodes[i], nodes[j]);
            if (d2 < best_d2) {
                best_d2 = d2;
                best.i = i;
                best.j = j;
            }
        }
    best.distance = std::sqrt(best_d2);
    return best;
}

template <std::size_t dim>
EmptyDiskReport verify_empty_disk(const FillResult<dim>& result, const SpacingField<dim>& h,
                                  double eps = 1e-10) {
    if (result.predecessor.size() != result.nodes.size())
        throw std::invalid_argument("verify_empty_disk: result carries no predecessor function");
    EmptyDiskReport report;
    for (std::size_t j = result.seed_count; j < result.nodes.size(); ++j) {
        double r = h(result.nodes[static_cast<std::size_t>(result.predecessor[j])]);
        for (std::size_t k = 0; k < j; ++k) {
            double ratio = dist(result.nodes[k], result.nodes[j]) / r;
            if (ratio < report.worst_ratio) {
                report.worst_ratio = ratio;
                report.worst_j = j;
                report.worst_k = k;
            }
        }
    }
    report.pass = report.worst_ratio >= 1.0 - eps;
    return report;
}

}  // namespace serial

}  // namespace nodegen
