#include <doctest.h>

#include <sstream>

#include "nodegen/domain.hpp"
#include "nodegen/pgm.hpp"
#include "nodegen/spacing.hpp"

using namespace nodegen;

TEST_CASE("constant spacing") {
    auto h = constant_spacing<2>(0.025);
    CHECK(h({0.3, 0.7}) == 0.025);
    auto h3 = constant_spacing<3>(0.05);
    CHECK(h3({0, 0, 0}) == 0.05);
    CHECK_THROWS_AS(constant_spacing<2>(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(constant_spacing<2>(0.0), std::invalid_argument);
}

TEST_CASE("analytic spacing from expression string") {
    auto h = analytic_spacing<2>("0.015*(1+x+y)");
    CHECK(h({0, 0}) == doctest::Approx(0.015).epsilon(1e-14));
    CHECK(h({1, 1}) == doctest::Approx(0.045).epsilon(1e-14));
    CHECK(h({0.5, 0.5}) == doctest::Approx(0.030).epsilon(1e-14));
}

TEST_CASE("expression parser") {
    auto e = Expression::parse("2*x^2 + y/4 - 1");
    double vars[2] = {3.0, 8.0};
    CHECK(e.eval(vars, 2) == doctest::Approx(2 * 9 + 2 - 1));
    CHECK_THROWS_AS(Expression::parse("2 +"), std::invalid_argument);
    CHECK_THROWS_AS(Expression::parse("(1"), std::invalid_argument);
    // z is out of bounds in 2-D
    auto ez = Expression::parse("z");
    CHECK_THROWS_AS(ez.eval(vars, 2), std::invalid_argument);
    // right-associative power
    auto pw = Expression::parse("2^3^2");
    CHECK(pw.eval(nullptr, 0) == doctest::Approx(512.0));
}

TEST_CASE("image spacing follows the gray-level map") {
    GrayImage img;
    img.width = 2;
    img.height = 2;
    img.pixels = {0, 255, 128, 64};

    auto h1 = image_spacing(img, 1.0);
    // pixel (0,0) has value 0: s(0) = 0.002
    CHECK(h1({0.0, 0.0}) == doctest::Approx(0.002).epsilon(1e-14));
    // pixel (0,1) has value 255: s(1) = 0.002 + 0.006 + 0.012 = 0.020
    CHECK(h1({0.0, 0.9}) == doctest::Approx(0.020).epsilon(1e-14));

    auto h15 = image_spacing(img, 1.5);
    CHECK(h15({0.0, 0.9}) == doctest::Approx(0.030).epsilon(1e-14));

    // piecewise constant: same pixel, same value
    CHECK(h1({0.1, 0.6}) == h1({0.4, 0.9}));
    // indices clamp at the raster edge
    CHECK(h1({5.0, 5.0}) == h1({0.9, 0.9}));
}

TEST_CASE("pgm round trip, both formats") {
    GrayImage img;
    img.width = 3;
    img.height = 2;
    img.pixels = {0, 10, 255, 7, 128, 31};
    for (bool binary : {false, true}) {
        std::stringstream buf;
        save_pgm(buf, img, binary);
        GrayImage back = load_pgm(buf);
        CHECK(back.width == 3);
        CHECK(back.height == 2);
        CHECK(back.pixels == img.pixels);
    }
    std::stringstream bad("P2\n2 2\n65535\n0 0 0 0\n");
    CHECK_THROWS(load_pgm(bad));
}

TEST_CASE("estimate_count: constant h on boxes is exact") {
    auto square = make_box<2>({0, 0}, {1, 1});
    CHECK(estimate_count<2>(square, constant_spacing<2>(0.025), 1) == doctest::Approx(1600.0));
    auto cube = make_box<3>({0, 0, 0}, {1, 1, 1});
    CHECK(estimate_count<3>(cube, constant_spacing<3>(0.05), 1) == doctest::Approx(8000.0));
    auto rect = make_box<2>({0, 0}, {2, 3});
    CHECK(estimate_count<2>(rect, constant_spacing<2>(0.1), 1) == doctest::Approx(600.0));
    CHECK_THROWS_AS(estimate_count<2>(square, constant_spacing<2>(0.025), 0), std::invalid_argument);
}

TEST_CASE("estimate_count: Monte Carlo path agrees with the exact value") {
    auto square = make_box<2>({0, 0}, {1, 1});
    square.volume_hint = -1;  // force the sampling path
    double est = estimate_count<2>(square, constant_spacing<2>(0.025), 1000000, 9);
    CHECK(est == doctest::Approx(1600.0).epsilon(0.01));
}

TEST_CASE("estimate_count: Monte Carlo on variable h matches quadrature") {
    auto square = make_box<2>({0, 0}, {1, 1});
    auto h = analytic_spacing<2>("0.015*(1+x+y)");
    // oracle: midpoint quadrature of 1/h^2 on a 400x400 grid
    double exact = 0;
    const int m = 400;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double x = (i + 0.5) / m, y = (j + 0.5) / m;
            double hv = 0.015 * (1 + x + y);
            exact += 1.0 / (hv * hv) / (m * m);
        }
    double est = estimate_count<2>(square, h, 400000, 42);
    CHECK(est == doctest::Approx(exact).epsilon(0.02));
}

TEST_CASE("estimate_count survives a divergent spacing function") {
    // N(h) = integral of 1/h diverges logarithmically toward x = 0
    auto seg = make_box<1>({0}, {1});
    auto h = analytic_spacing<1>([](const Vec<1>& p) { return 0.1 * p[0]; });
    double a = estimate_count<1>(seg, h, 10000, 7);
    double b = estimate_count<1>(seg, h, 1000000, 7);
    CHECK(std::isfinite(a));
    CHECK(std::isfinite(b));
    CHECK(a > 0);
    CHECK(b > 0);
}

TEST_CASE("estimate_count reports the offending point for nonpositive h") {
    auto square = make_box<2>({0, 0}, {1, 1});
    auto h = analytic_spacing<2>([](const Vec<2>& p) { return p[0] - 0.5; });
    CHECK_THROWS_AS(estimate_count<2>(square, h, 1000, 3), std::domain_error);
}
