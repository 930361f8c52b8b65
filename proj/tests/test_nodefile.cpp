#include <doctest.h>

#include <sstream>

#include "nodegen/config.hpp"
#include "nodegen/nodefile.hpp"

using namespace nodegen;

TEST_CASE("node file round trip is bit exact") {
    NodeFile file;
    file.set_points<2>({{0.1234567890123456789, 1e-17}, {std::atan(1.0), -0.75}});
    file.algorithm = "pnp";
    file.h_spec = "0.025";
    file.domain_spec = "box 0 0 1 1";
    file.seed = 42;
    file.seed_count = 1;
    file.has_beta = true;
    file.beta = {-1, 0};
    file.terminal = {1};

    std::stringstream buf;
    write_node_file(buf, file);
    NodeFile back = read_node_file(buf);
    CHECK(back.dim == 2);
    CHECK(back.count() == 2);
    CHECK(back.coords == file.coords);
    CHECK(back.beta == file.beta);
    CHECK(back.terminal == file.terminal);
    CHECK(back.algorithm == "pnp");
    CHECK(back.seed == 42);
    CHECK(back.seed_count == 1);
    CHECK_FALSE(back.truncated);

    // byte-identical on rewrite
    std::stringstream buf2;
    write_node_file(buf2, back);
    CHECK(buf2.str() == buf.str());
}

TEST_CASE("node file rejects inconsistent headers") {
    std::stringstream bad("# {\"dim\":2,\"count\":3}\n0.0,0.0\n");
    CHECK_THROWS(read_node_file(bad));
    std::stringstream nohdr("0.0,0.0\n");
    CHECK_THROWS(read_node_file(nohdr));
}

TEST_CASE("domain spec parses and rebuilds") {
    auto spec = DomainSpec::parse("box 0 0 1 1");
    CHECK(spec.dim == 2);
    auto domain = spec.build<2>();
    CHECK(domain.contains({0.5, 0.5}));
    CHECK(spec.to_string() == "box 0 0 1 1");

    auto ball = DomainSpec::parse("ball 0 0 0 1");
    CHECK(ball.dim == 3);

    auto diff = DomainSpec::parse("diff box 0 0 1 1 box 0.25 0.25 0.75 0.75");
    CHECK(diff.dim == 2);
    auto omega = diff.build<2>();
    CHECK_FALSE(omega.contains({0.5, 0.5}));
    CHECK(omega.contains({0.1, 0.1}));
    // round trip through the string form
    auto again = DomainSpec::parse(diff.to_string());
    CHECK(again.to_string() == diff.to_string());

    CHECK_THROWS_AS(DomainSpec::parse("pentagon 1 2 3"), std::invalid_argument);
    CHECK_THROWS_AS(DomainSpec::parse("box 0 0 1"), std::invalid_argument);
}

TEST_CASE("spacing spec distinguishes constant, analytic and image") {
    auto c = SpacingSpec::parse("0.025");
    CHECK(c.is_constant());
    CHECK(c.build<2>()({0.1, 0.2}) == 0.025);

    auto a = SpacingSpec::parse("0.015*(1+x+y)");
    CHECK_FALSE(a.is_constant());
    CHECK(a.build<2>()({1, 1}) == doctest::Approx(0.045));

    auto img = SpacingSpec::parse("img:some/file.pgm:1.5");
    CHECK(img.kind == SpacingSpec::Kind::image);
    CHECK(img.image_path == "some/file.pgm");
    CHECK(img.h0 == 1.5);

    CHECK_THROWS_AS(SpacingSpec::parse("-0.5"), std::invalid_argument);
    CHECK_THROWS_AS(SpacingSpec::parse("spam()"), std::invalid_argument);
}
