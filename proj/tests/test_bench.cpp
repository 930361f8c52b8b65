#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "nodegen/bench.hpp"

using namespace nodegen;

TEST_CASE("slope fit recovers a synthetic power law") {
    std::vector<BenchRecord> records;
    for (double n : {1e4, 3e4, 1e5, 3e5}) {
        BenchRecord r;
        r.nodes = static_cast<std::size_t>(n);
        r.median_seconds = 2.5e-7 * std::pow(n, 1.5);
        records.push_back(r);
    }
    CHECK(fit_loglog_slope(records) == doctest::Approx(1.5).epsilon(1e-9));
    // points below the cutoff are ignored
    BenchRecord junk;
    junk.nodes = 100;
    junk.median_seconds = 1e3;
    records.push_back(junk);
    CHECK(fit_loglog_slope(records) == doctest::Approx(1.5).epsilon(1e-9));
    CHECK_THROWS_AS(fit_loglog_slope({junk}), std::invalid_argument);
}

TEST_CASE("h_for_targets lands near the requested counts") {
    auto hs = h_for_targets({1e4, 1e5});
    REQUIRE(hs.size() == 2);
    CHECK(1.0 / (hs[0] * hs[0]) == doctest::Approx(1e4).epsilon(0.02));
    CHECK(1.0 / (hs[1] * hs[1]) == doctest::Approx(1e5).epsilon(0.02));
}

TEST_CASE("sweep produces one record per (h, algorithm) with counted nodes") {
    auto records = sweep_unit_square({"pnp", "ff"}, {0.05}, 3, 7);
    REQUIRE(records.size() == 2);
    for (const auto& r : records) {
        CHECK(r.nodes > 300);
        CHECK(r.seconds.size() == 3);
        CHECK(r.median_seconds > 0);
    }
}

TEST_CASE("records reproduce node counts exactly for a fixed seed") {
    auto a = sweep_unit_square({"pnp", "skf"}, {0.04}, 3, 11);
    auto b = sweep_unit_square({"pnp", "skf"}, {0.04}, 3, 11);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].nodes == b[i].nodes);
}

TEST_CASE("shrinking domain records carry alpha and shrink pnp work") {
    auto records = shrinking_domain({"pnp"}, {0.1, 0.4}, 0.02, 3, 7);
    REQUIRE(records.size() == 2);
    CHECK(records[0].alpha == 0.1);
    CHECK(records[1].alpha == 0.4);
    // node counts scale with the remaining area 1 - 4 alpha^2
    double expect = (1 - 4 * 0.4 * 0.4) / (1 - 4 * 0.1 * 0.1);
    double got = static_cast<double>(records[1].nodes) / records[0].nodes;
    CHECK(got == doctest::Approx(expect).epsilon(0.10));
    CHECK_THROWS_AS(shrinking_domain({"pnp"}, {0.7}, 0.02, 3, 7), std::invalid_argument);
    CHECK_THROWS_AS(sweep_unit_square({"pnp"}, {0.05}, 2, 7), std::invalid_argument);
}
