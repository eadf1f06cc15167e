#include "cbound/chronology.hpp"
#include "cbound/error.hpp"

#include "property.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

using namespace cbound;

namespace {

const Numerics kNum{};

// Chronology of a constant-cone metric with null slope k, in closed form.
bool constant_chron_oracle(double k, const Point& p, const Point& q) {
    return q.t() - p.t() > k * std::abs(q.x() - p.x());
}

std::shared_ptr<const NullCurve> x_curve(const ConeField& m, double t) {
    return std::make_shared<const NullCurve>(integrate_null(m, Family::X, {-1.0, t}, kNum.window));
}

} // namespace

TEST_CASE("past of a point") {
    const Point p(0, -1);
    const auto cc = past_of_point(ConeField::minkowski(), p);
    const auto ca = past_of_point(ConeField::narrow(), p);
    for (double s : {-5.0, -2.0, -1.0, -0.5, -0.01}) {
        CHECK(cc.boundary(s) == doctest::Approx(-std::abs(s + 1.0)).epsilon(1e-12));
        CHECK(ca.boundary(s) == doctest::Approx(-std::abs(s + 1.0) / 2.0).epsilon(1e-12));
    }
    const auto g = past_of_point(ConeField::strain(), p);
    CHECK(g.boundary(-2.0) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(g.kind() == PastKind::PointPast);
    CHECK(g.left_tail() == LeftTail::XBounded);
}

TEST_CASE("chronological relation examples") {
    const auto cc = ConeField::minkowski();
    CHECK(chron_rel(cc, Point(-2, -1), Point(0, -1)) == Ternary::Inside);
    CHECK(chron_rel(cc, Point(0, -1), Point(0.5, -2)) == Ternary::Outside);
    CHECK(chron_rel(ConeField::strain(), Point(0, -1), Point(0.6, -2)) == Ternary::Inside);
    CHECK(chron_rel(cc, Point(0, -1), Point(1, -2)) == Ternary::Boundary); // on the null line
}

TEST_CASE("constant metrics agree with the closed-form cone") {
    for (const auto& [m, k] : {std::pair{ConeField::minkowski(), 1.0}, std::pair{ConeField::narrow(), 0.5}}) {
        cbtest::for_all(31, 3000, [&](cbtest::Gen& g, int) {
            const auto p = g.point(-3, 3, -3, -0.05), q = g.point(-3, 3, -3, -0.05);
            const double clearance = std::abs((q.t() - p.t()) - k * std::abs(q.x() - p.x()));
            if (clearance < 1e-8) return;
            const bool inside = chron_rel(m, p, q) == Ternary::Inside;
            REQUIRE(inside == constant_chron_oracle(k, p, q));
        });
    }
}

TEST_CASE("cone monotonicity of the chronological relation") {
    const auto cc = ConeField::minkowski(), g = ConeField::strain(), ca = ConeField::narrow();
    std::size_t cc_inside = 0;
    cbtest::for_all(32, 10000, [&](cbtest::Gen& gen, int) {
        const auto p = gen.point(-3, 3, -3, -0.05), q = gen.point(-3, 3, -3, -0.05);
        if (chron_rel(cc, p, q) == Ternary::Inside) {
            ++cc_inside;
            REQUIRE(chron_rel(g, p, q) == Ternary::Inside);
        }
        if (chron_rel(g, p, q) == Ternary::Inside) REQUIRE(chron_rel(ca, p, q) == Ternary::Inside);
    });
    CHECK(cc_inside > 1000);
}

TEST_CASE("openness and transitivity on samples") {
    const auto g = ConeField::strain();
    cbtest::for_all(33, 1500, [&](cbtest::Gen& gen, int) {
        const auto p = gen.point(-3, 3, -3, -0.1), q = gen.point(-3, 3, -3, -0.1);
        if (chron_rel(g, p, q) != Ternary::Inside) return;
        const double r = kNum.margin / 2.0 * gen.uniform(0.0, 1.0);
        const double a = gen.uniform(0.0, 2.0 * M_PI);
        const Point p2(p.t() + r * std::cos(a), p.x() + r * std::sin(a));
        // Perturbations below margin/2 may land in the margin band but never outside.
        REQUIRE(chron_rel(g, p2, q) != Ternary::Outside);
        const auto w = gen.point(-3, 3, -3, -0.1);
        if (chron_rel(g, q, w) == Ternary::Inside) REQUIRE(chron_rel(g, p, w) == Ternary::Inside);
    });
}

TEST_CASE("past of a null curve reproduces its graph") {
    const auto g = ConeField::strain();
    const auto grid = comparison_grid(kNum.window);
    for (double t : {-1.0, -0.9, -0.75, -0.6, -0.5}) {
        const auto c = x_curve(g, t);
        const auto with_carrier = past_of_curve(g, ladder_on(g, c, kNum));
        // Same samples without the carrier: the max of the point pasts.
        auto bare = ladder_on(g, c, kNum);
        bare.carrier.reset();
        const auto from_points = past_of_curve(g, bare);
        INFO("t = " << t);
        for (double s : grid) {
            REQUIRE(std::abs(with_carrier.boundary(s) - c->value(s)) <= 1e-6);
            REQUIRE(std::abs(from_points.boundary(s) - c->value(s)) <= 1e-6);
        }
    }
}

TEST_CASE("pasts of curves under other metrics") {
    const auto grid = comparison_grid(kNum.window);
    // The Minkowski null line ending at (0, 0).
    const auto cc = ConeField::minkowski();
    const auto line = std::make_shared<const NullCurve>(*x_curve_ending_at(cc, 0.0, kNum.window));
    const auto pc = past_of_curve(cc, ladder_on(cc, line, kNum));
    for (double s : grid) REQUIRE(pc.boundary(s) == doctest::Approx(s).epsilon(1e-12));

    // A strain curve seen with the narrow cones: the half-plane below t = s/2.
    const auto ca = ConeField::narrow();
    const auto strain_curve = x_curve(ConeField::strain(), -0.8);
    const auto pa = past_of_curve(ca, ladder_on(ConeField::strain(), strain_curve, kNum));
    for (double s : grid) REQUIRE(std::abs(pa.boundary(s) - s / 2.0) <= 1e-6);
}

TEST_CASE("past of a curve rejects unordered samples") {
    CausalCurve c;
    c.points = {Point(0, -1), Point(-1, -1)};
    CHECK_THROWS_AS(past_of_curve(ConeField::minkowski(), c), InvalidInput);
    CHECK_THROWS_AS(past_of_curve(ConeField::minkowski(), CausalCurve{}), InvalidInput);
}

TEST_CASE("inclusion of curve pasts") {
    const auto g = ConeField::strain();
    const auto grid = comparison_grid(kNum.window);
    auto P = [&](double t) { return past_of_curve(g, ladder_on(g, x_curve(g, t), kNum)); };
    const auto a = P(-1.0), b = P(-0.75), c = P(-0.5);
    const auto ab = pastset_leq(a, b, grid);
    CHECK(ab.relation == Ternary::Inside);
    CHECK(ab.strict);
    const auto bb = pastset_leq(b, b, grid);
    CHECK(bb.relation == Ternary::Inside);
    CHECK(!bb.strict);
    const auto ca = pastset_leq(c, a, grid);
    CHECK(ca.relation == Ternary::Outside);
    REQUIRE(ca.witness_s);
    CHECK(c.boundary(*ca.witness_s) > a.boundary(*ca.witness_s));
    CHECK(pastset_leq(a, PastSet::whole(), grid).relation == Ternary::Inside);
    CHECK(pastset_leq(PastSet::whole(), a, grid).relation == Ternary::Outside);
    CHECK_THROWS_AS(pastset_leq(a, b, std::span<const double>{}), InvalidInput);
}

TEST_CASE("right limits at the boundary") {
    const auto g = ConeField::strain();
    auto P = [&](double t) { return past_of_curve(g, ladder_on(g, x_curve(g, t), kNum)); };
    const auto l = P(-0.75).right_limit(g);
    CHECK(l.lo == 0.0);
    CHECK(l.hi == 0.0);
    const auto m = P(0.0).right_limit(g);
    CHECK(m.lo <= 0.5);
    CHECK(m.hi >= 0.5);
    CHECK(m.hi - m.lo <= 1e-5);
}

TEST_CASE("comparison grid") {
    const auto grid = comparison_grid(kNum.window);
    CHECK(std::is_sorted(grid.begin(), grid.end()));
    CHECK(std::adjacent_find(grid.begin(), grid.end()) == grid.end());
    CHECK(grid.front() == kNum.window.s_min);
    CHECK(grid.back() == kNum.window.x_stop);
    CHECK_THROWS_AS(comparison_grid({-1.0, 0.0}), InvalidInput);
}

TEST_CASE("boundary csv") {
    std::ostringstream os;
    const std::vector<double> grid{-2.0, -1.0};
    write_pastset_csv(os, past_of_point(ConeField::minkowski(), Point(0, -1)), grid);
    CHECK(os.str() == "s,b\n-2,-1\n-1,0\n");
}
