#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nodegen {

// One benchmark measurement: median wall time of `seconds.size()` timed
// repeats of a single fill (a discarded warm-up run precedes them).
struct BenchRecord {
    std::string algorithm;  // pnp | pnp-grid | ff | skf
    double h = 0;
    double alpha = -1;  // shrinking-domain parameter, -1 for plain sweeps
    std::size_t nodes = 0;
    double median_seconds = 0;
    std::vector<double> seconds;
    bool timer_warning = false;  // median below 1 ms
};

// Density sweep on the unit square: each algorithm is run for every h with
// boundary seeds; only the fill call is timed.
std::vector<BenchRecord> sweep_unit_square(const std::vector<std::string>& algorithms,
                                           const std::vector<double>& h_list, int repeats,
                                           std::uint64_t seed);

// Fill times on Omega(alpha) = [0,1]^2 minus the open square of half-width
// alpha at the center. The pnp variants start from a random interior seed
// node, so their work scales with the remaining area; ff and skf always
// process the full (oriented) bounding box.
std::vector<BenchRecord> shrinking_domain(const std::vector<std::string>& algorithms,
                                          const std::vector<double>& alphas, double h, int repeats,
                                          std::uint64_t seed);

// Least-squares slope of log(median time) vs log(N) over records with
// nodes >= min_nodes.
double fit_loglog_slope(const std::vector<BenchRecord>& records, double min_nodes = 1e4);

// Spacings that make the unit-square node count land near each target.
std::vector<double> h_for_targets(const std::vector<double>& target_counts);

}  // namespace nodegen
