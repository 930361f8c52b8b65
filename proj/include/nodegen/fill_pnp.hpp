#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "nodegen/domain.hpp"
#include "nodegen/pattern.hpp"
#include "nodegen/rng.hpp"
#include "nodegen/spacing.hpp"
#include "nodegen/spatial.hpp"

namespace nodegen {

struct FillStats {
    double seconds = 0;
    std::uint64_t candidates_generated = 0;
    std::uint64_t candidates_accepted = 0;
};

// Result of a fill run. The first seed_count entries are the seeds, in input
// order; each later node j carries predecessor[j], the index of the node
// whose expansion generated it. Immutable once returned.
template <std::size_t dim>
struct FillResult {
    std::vector<Vec<dim>> nodes;
    std::size_t seed_count = 0;
    std::vector<std::int64_t> predecessor;  // aligned with nodes, -1 for seeds
    std::vector<std::int64_t> terminal;     // nodes whose expansion accepted nothing
    bool truncated = false;                 // max_nodes reached
    FillStats stats;
};

struct PnpOptions {
    CandidateStrategy strategy;
    std::size_t max_nodes = 10'000'000;
    double proximity_tolerance = 1e-10;  // acceptance uses (1 - eps) * r_i
};

namespace detail {

// Draws a uniform random point of the domain by rejection sampling in the
// bounding box.
template <std::size_t dim>
Vec<dim> random_interior_point(const Domain<dim>& domain, Rng& rng) {
    for (long attempt = 0; attempt < 1'000'000; ++attempt) {
        Vec<dim> p;
        for (std::size_t i = 0; i < dim; ++i) p[i] = rng.uniform(domain.lo[i], domain.hi[i]);
        if (domain.contains(p)) return p;
    }
    throw std::runtime_error("pnp_fill: no interior point found in 1e6 bounding-box draws; domain looks empty");
}

// Queue-driven expansion around the spatial index `index` (reset and
// bulk-loaded on the seeds here). Node acceptance: inside the domain and no
// existing node closer than (1 - eps) * r_i. Both index realizations run the
// exact same code path, so runs with the same seed produce identical node
// lists.
template <std::size_t dim, class Index>
FillResult<dim> pnp_fill_with_index(const Domain<dim>& domain, const SpacingField<dim>& h,
                                    const std::vector<Vec<dim>>& seeds, const PnpOptions& opt,
                                    Rng& rng, Index& index) {
    auto t0 = std::chrono::steady_clock::now();
    FillResult<dim> result;

    // Seed the queue; near-duplicate seeds (within eps * h) would stall local
    // regularity and are dropped. The index is bulk-loaded on the seed set,
    // as in the incremental-structure initialization step.
    if (seeds.empty()) {
        result.nodes.push_back(random_interior_point(domain, rng));
    } else {
        std::map<std::array<long long, dim>, char> occupied;
        for (const Vec<dim>& s : seeds) {
            if (!domain.contains(s))
                throw std::invalid_argument("pnp_fill: seed outside the domain closure");
            double cell = std::max(opt.proximity_tolerance * h(s), 1e-300);
            std::array<long long, dim> key;
            for (std::size_t i = 0; i < dim; ++i) key[i] = static_cast<long long>(std::floor(s[i] / cell));
            if (!occupied.emplace(key, 0).second) continue;
            result.nodes.push_back(s);
        }
    }
    index.init(result.nodes);
    result.seed_count = result.nodes.size();
    result.predecessor.assign(result.nodes.size(), -1);

    CandidateSource<dim> source(opt.strategy, rng);
    std::vector<Vec<dim>> candidates;
    candidates.reserve(source.count());

    if (result.nodes.size() >= opt.max_nodes) result.truncated = true;

    for (std::size_t i = 0; i < result.nodes.size() && !result.truncated; ++i) {
        Vec<dim> p = result.nodes[i];
        double r = h(p);
        if (!(r > 0)) throw std::domain_error("pnp_fill: h must be strictly positive on the domain");
        source.generate(p, r, candidates);
        result.stats.candidates_generated += candidates.size();
        double accept_r = (1.0 - opt.proximity_tolerance) * r;
        double accept_r2 = accept_r * accept_r;
        bool accepted_any = false;
        for (const Vec<dim>& c : candidates) {
            if (!domain.contains(c)) continue;
            if (index.nearest(c).dist2 < accept_r2) continue;
            result.nodes.push_back(c);
            result.predecessor.push_back(static_cast<std::int64_t>(i));
            index.insert(c);
            ++result.stats.candidates_accepted;
            accepted_any = true;
            if (result.nodes.size() >= opt.max_nodes) {
                result.truncated = true;
                break;
            }
        }
        if (!accepted_any) result.terminal.push_back(static_cast<std::int64_t>(i));
    }

    result.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

}  // namespace detail

// Node placing with a k-d tree search structure; works for any spacing
// function.
template <std::size_t dim>
FillResult<dim> pnp_fill(const Domain<dim>& domain, const SpacingField<dim>& h,
                         const std::vector<Vec<dim>>& seeds, const PnpOptions& opt, Rng& rng) {
    DynamicKdTree<dim> tree;
    return detail::pnp_fill_with_index(domain, h, seeds, opt, rng, tree);
}

// Node placing with a uniform background grid (cell size h/sqrt(d)),
// restricted to constant spacing.
template <std::size_t dim>
FillResult<dim> pnp_fill_grid(const Domain<dim>& domain, const SpacingField<dim>& h,
                              const std::vector<Vec<dim>>& seeds, const PnpOptions& opt, Rng& rng) {
    if (!h.is_constant())
        throw std::invalid_argument("pnp_fill_grid: grid search structure requires constant h");
    BackgroundGrid<dim> grid(domain.lo, domain.hi, h.const_value, h.const_value);
    return detail::pnp_fill_with_index(domain, h, seeds, opt, rng, grid);
}

}  // namespace nodegen
