#pragma once

#include <chrono>
#include <stdexcept>
#include <string>

#include "nodegen/domain.hpp"
#include "nodegen/fill_ff.hpp"
#include "nodegen/fill_pnp.hpp"
#include "nodegen/fill_skf.hpp"

namespace nodegen {

// One fill run under a common interface, used by the CLI and the benchmark
// harness. `seconds` covers the fill call only (boundary discretization and
// rng construction excluded).
template <std::size_t dim>
struct RunOutput {
    std::vector<Vec<dim>> nodes;
    std::size_t seed_count = 0;
    double seconds = 0;
    bool has_fill_result = false;
    FillResult<dim> fill;  // populated for the pnp variants
};

struct RunParams {
    PnpOptions pnp;
    int ff_n = 5;
    int skf_n = 15;
    bool pnp_random_seed_node = false;  // start pnp from a random interior node
};

template <std::size_t dim>
RunOutput<dim> run_algorithm(const std::string& alg, const Domain<dim>& domain,
                             const SpacingField<dim>& h, const BoundaryDiscretization<dim>& boundary,
                             const RunParams& params, std::uint64_t seed) {
    RunOutput<dim> out;
    Rng rng(seed);
    auto t0 = std::chrono::steady_clock::now();
    if (alg == "pnp" || alg == "pnp-grid") {
        const std::vector<Vec<dim>> no_seeds;
        const std::vector<Vec<dim>>& seeds = params.pnp_random_seed_node ? no_seeds : boundary.points;
        out.fill = alg == "pnp" ? pnp_fill<dim>(domain, h, seeds, params.pnp, rng)
                                : pnp_fill_grid<dim>(domain, h, seeds, params.pnp, rng);
        out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.nodes = out.fill.nodes;
        out.seed_count = out.fill.seed_count;
        out.has_fill_result = true;
        return out;
    }
    if (alg == "ff") {
        if constexpr (dim == 2) {
            out.nodes = ff_fill_domain(domain, h, params.ff_n, boundary);
            out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            out.seed_count = boundary.points.size();
            return out;
        } else {
            throw std::invalid_argument("FF supports 2-D only");
        }
    }
    if (alg == "skf") {
        out.nodes = skf_fill<dim>(domain, h, boundary, params.skf_n, rng);
        out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.seed_count = boundary.points.size();
        return out;
    }
    throw std::invalid_argument("unknown algorithm '" + alg + "' (expected pnp, pnp-grid, ff, skf)");
}

inline CandidateStrategy strategy_for(int dim, const std::string& variant, int n_override = 0,
                                      int k_override = 0) {
    CandidateVariant v;
    if (variant == "random")
        v = CandidateVariant::random;
    else if (variant == "fixed-pattern")
        v = CandidateVariant::fixed_pattern;
    else if (variant == "randomized-pattern")
        v = CandidateVariant::randomized_pattern;
    else
        throw std::invalid_argument("unknown candidate strategy '" + variant + "'");
    CandidateStrategy s = CandidateStrategy::defaults_for(dim, v);
    if (n_override > 0) s.n = n_override;
    if (k_override > 0) s.k = k_override;
    return s;
}

}  // namespace nodegen
