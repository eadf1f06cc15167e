#include "cbound/conefield.hpp"
#include "cbound/error.hpp"

#include "property.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace cbound;

namespace {

// Independent evaluation of the default transition: the exponential bump
// e^{-1/s} normalised against its mirror image.
double mollifier_oracle(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / s), b = std::exp(-1.0 / (1.0 - s));
    return a / (a + b);
}

} // namespace

TEST_CASE("point rejects the boundary and the right half-plane") {
    CHECK_NOTHROW(Point(0.0, -1e-300));
    CHECK_THROWS_AS(Point(0.0, 0.0), InvalidInput);
    CHECK_THROWS_AS(Point(0.0, 1.0), InvalidInput);
    CHECK_THROWS_AS(Point(std::nan(""), -1.0), InvalidInput);
    CHECK_THROWS_AS(Point(0.0, -std::numeric_limits<double>::infinity()), InvalidInput);
}

TEST_CASE("beta on the constant branches and at the midpoint") {
    const BetaProfile b;
    CHECK(beta_eval(b, 0.3) == 0.25);
    CHECK(beta_eval(b, 1.7) == 1.0);
    const double mid = 0.25 + 0.75 * mollifier_oracle(0.5);
    CHECK(mid == doctest::Approx(0.625).epsilon(1e-15));
    CHECK(beta_eval(b, 0.75) == doctest::Approx(mid).epsilon(1e-15));
    CHECK_THROWS_AS(beta_eval(b, std::nan("")), InvalidInput);
    CHECK_THROWS_AS(beta_eval(b, std::numeric_limits<double>::infinity()), InvalidInput);
}

TEST_CASE("beta matches the mollifier oracle inside the transition") {
    const BetaProfile b;
    cbtest::for_all(11, 2000, [&](cbtest::Gen& g, int) {
        const double u = g.uniform(0.5, 1.0);
        CHECK(b(u) == doctest::Approx(0.25 + 0.75 * mollifier_oracle(2.0 * u - 1.0)).epsilon(1e-14));
    });
}

TEST_CASE("beta is monotone, strictly so on the transition, and bounded") {
    const BetaProfile b;
    double prev = b(0.0);
    for (int i = 1; i <= 20000; ++i) {
        const double u = 2.0 * i / 20000.0;
        const double v = b(u);
        REQUIRE(v >= prev);
        if (u > 0.55 && u < 0.95) REQUIRE(v > prev); // the bump underflows closer to the ends
        REQUIRE(v >= 0.25);
        REQUIRE(v <= 1.0);
        prev = v;
    }
}

TEST_CASE("constant regions are bit-exact") {
    const BetaProfile b;
    cbtest::for_all(12, 5000, [&](cbtest::Gen& g, int) {
        REQUIRE(b(g.uniform(-50.0, 0.5)) == 0.25);
        REQUIRE(b(g.uniform(1.0, 50.0)) == 1.0);
    });
    CHECK(b(0.5) == 0.25);
    CHECK(b(1.0) == 1.0);
}

TEST_CASE("beta is continuously differentiable across the junctions") {
    const BetaProfile b;
    // One-sided difference quotients vanish at both ends of the transition.
    for (double h : {1e-2, 5e-3, 2e-3}) {
        CHECK((b(0.5 + h) - b(0.5)) / h < 1e-6);
        CHECK((b(1.0) - b(1.0 - h)) / h < 1e-6);
    }
}

TEST_CASE("null slopes") {
    for (const auto& p : {Point(0, -1), Point(-3, -1), Point(5, -0.01)}) {
        CHECK(null_slope(ConeField::minkowski(), p) == 1.0);
        CHECK(null_slope(ConeField::narrow(), p) == 0.5);
    }
    CHECK(null_slope(ConeField::strain(), Point(-3, -1)) == 1.0);
    CHECK(null_slope(ConeField::strain(), Point(0, -1)) == 0.5);
}

TEST_CASE("causal vectors") {
    const auto g = ConeField::strain();
    CHECK(is_causal_vector(g, Point(-3, -1), 1, 1) == Ternary::Boundary);
    CHECK(is_causal_vector(g, Point(-3, -1), 1, 2) == Ternary::Outside);
    CHECK(is_causal_vector(g, Point(0, -1), 1, 2) == Ternary::Boundary);
    CHECK(is_causal_vector(g, Point(0, -1), 1, 1) == Ternary::Inside);
    CHECK(is_causal_vector(g, Point(0, -1), -1, 0) == Ternary::Outside);
    CHECK_THROWS_AS(is_causal_vector(g, Point(0, -1), 0, 0), InvalidInput);
}

TEST_CASE("cone chain on random vectors") {
    const auto cc = ConeField::minkowski(), g = ConeField::strain(), ca = ConeField::narrow();
    cbtest::for_all(13, 10000, [&](cbtest::Gen& gen, int) {
        const auto p = gen.point(-5, 5, -5, -1e-3);
        const double vt = gen.uniform(1e-3, 2.0), vx = gen.uniform(-2.0, 2.0);
        if (is_causal_vector(cc, p, vt, vx) == Ternary::Inside)
            REQUIRE(is_causal_vector(g, p, vt, vx) != Ternary::Outside);
        if (is_causal_vector(g, p, vt, vx) == Ternary::Inside)
            REQUIRE(is_causal_vector(ca, p, vt, vx) != Ternary::Outside);
    });
}

TEST_CASE("cone comparison over the reference grid") {
    const auto grid = sample_grid(-3, 3, -3, -0.05, 50, 50);
    const auto cc = ConeField::minkowski(), g = ConeField::strain(), ca = ConeField::narrow();
    CHECK(cone_compare(cc, g, grid).relation == ConeRelation::Included);
    CHECK(cone_compare(g, ca, grid).relation == ConeRelation::Included);
    CHECK(cone_compare(cc, ca, grid).relation == ConeRelation::Included);
    CHECK(cone_compare(g, cc, grid).relation == ConeRelation::ReverseIncluded);
    CHECK(cone_compare(cc, cc, grid).relation == ConeRelation::Equal);
    CHECK_THROWS_AS(cone_compare(cc, g, std::span<const Point>{}), InvalidInput);

    // Antisymmetry: inclusion both ways is equality.
    for (const auto& a : {cc, g, ca})
        for (const auto& b : {cc, g, ca}) {
            const auto ab = cone_compare(a, b, grid).relation;
            const auto ba = cone_compare(b, a, grid).relation;
            const bool fwd = ab == ConeRelation::Included || ab == ConeRelation::Equal;
            const bool rev = ba == ConeRelation::Included || ba == ConeRelation::Equal;
            if (fwd && rev) CHECK(ab == ConeRelation::Equal);
        }
}

TEST_CASE("metric ids") {
    CHECK(ConeField::from_id("g").kind() == MetricKind::Strain);
    CHECK(ConeField::from_id("g_cc").id() == "g_cc");
    CHECK_THROWS_AS(ConeField::from_id("minkowski"), InvalidInput);
}
