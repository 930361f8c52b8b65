#include "nodegen/bench.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nodegen/runner.hpp"

namespace nodegen {

namespace {

BenchRecord measure(const std::string& alg, const Domain<2>& domain, const SpacingField<2>& h,
                    const BoundaryDiscretization<2>& boundary, const RunParams& params, int repeats,
                    std::uint64_t seed) {
    if (repeats < 3) throw std::invalid_argument("bench: repeats must be >= 3");
    BenchRecord rec;
    rec.algorithm = alg;
    rec.h = h.const_value;

    RunOutput<2> warmup = run_algorithm<2>(alg, domain, h, boundary, params, seed);
    rec.nodes = warmup.nodes.size();
    for (int r = 0; r < repeats; ++r)
        rec.seconds.push_back(run_algorithm<2>(alg, domain, h, boundary, params, seed).seconds);
    std::vector<double> sorted = rec.seconds;
    std::sort(sorted.begin(), sorted.end());
    rec.median_seconds = sorted[sorted.size() / 2];
    rec.timer_warning = rec.median_seconds < 1e-3;
    return rec;
}

}  // namespace

std::vector<BenchRecord> sweep_unit_square(const std::vector<std::string>& algorithms,
                                           const std::vector<double>& h_list, int repeats,
                                           std::uint64_t seed) {
    Domain<2> square = make_box<2>({0, 0}, {1, 1});
    std::vector<BenchRecord> records;
    for (double hv : h_list) {
        SpacingField<2> h = constant_spacing<2>(hv);
        BoundaryDiscretization<2> boundary = discretize_boundary(square, h);
        for (const std::string& alg : algorithms) {
            RunParams params;
            params.pnp.strategy = CandidateStrategy::defaults_for(2);
            records.push_back(measure(alg, square, h, boundary, params, repeats, seed));
        }
    }
    return records;
}

std::vector<BenchRecord> shrinking_domain(const std::vector<std::string>& algorithms,
                                          const std::vector<double>& alphas, double hv, int repeats,
                                          std::uint64_t seed) {
    std::vector<BenchRecord> records;
    SpacingField<2> h = constant_spacing<2>(hv);
    for (double alpha : alphas) {
        if (!(alpha > 0 && alpha < 0.5))
            throw std::invalid_argument("shrinking_domain: alpha must lie in (0, 0.5)");
        Domain<2> omega = difference(make_box<2>({0, 0}, {1, 1}),
                                     make_box<2>({0.5 - alpha, 0.5 - alpha}, {0.5 + alpha, 0.5 + alpha}));
        BoundaryDiscretization<2> boundary = discretize_boundary(omega, h);
        for (const std::string& alg : algorithms) {
            RunParams params;
            params.pnp.strategy = CandidateStrategy::defaults_for(2);
            params.pnp_random_seed_node = true;
            BenchRecord rec = measure(alg, omega, h, boundary, params, repeats, seed);
            rec.alpha = alpha;
            records.push_back(rec);
        }
    }
    return records;
}

double fit_loglog_slope(const std::vector<BenchRecord>& records, double min_nodes) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const BenchRecord& r : records) {
        if (static_cast<double>(r.nodes) < min_nodes) continue;
        double x = std::log(static_cast<double>(r.nodes));
        double y = std::log(r.median_seconds);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) throw std::invalid_argument("fit_loglog_slope: need >= 2 records above min_nodes");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> h_for_targets(const std::vector<double>& target_counts) {
    std::vector<double> hs;
    for (double target : target_counts) {
        if (!(target > 4)) throw std::invalid_argument("h_for_targets: target too small");
        hs.push_back(1.0 / std::round(std::sqrt(target)));
    }
    return hs;
}

}  // namespace nodegen
