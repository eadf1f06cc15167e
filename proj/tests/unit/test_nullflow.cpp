#include "cbound/error.hpp"
#include "cbound/nullflow.hpp"

#include "property.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace cbound;

namespace {

const IntegrationWindow kWindow{};

NullCurve x_curve(double t, const ConeField& m = ConeField::strain(), IntegratorOptions opt = {}) {
    return integrate_null(m, Family::X, {-1.0, t}, kWindow, opt);
}

// Reference solution: classical RK4 directly in (s, r) with a fixed step.
double rk4_reference(const ConeField& m, double t, double s_end, int steps) {
    auto f = [&](double s, double r) { return std::sqrt(m.beta_of_ratio(r / s)); };
    double s = -1.0, r = t;
    const double h = (s_end - s) / steps;
    for (int i = 0; i < steps; ++i) {
        const double k1 = f(s, r);
        const double k2 = f(s + h / 2, r + h / 2 * k1);
        const double k3 = f(s + h / 2, r + h / 2 * k2);
        const double k4 = f(s + h, r + h * k3);
        r += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        s += h;
    }
    return r;
}

// Root of beta(u) = u^2 on the transition, by bisection on the profile.
double interior_slope_oracle() {
    const auto g = ConeField::strain();
    double lo = 0.5 + 1e-12, hi = 1.0 - 1e-12; // beta(lo) < lo^2, beta(hi) > hi^2
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g.beta_of_ratio(mid) < mid * mid ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double max_dev(const NullCurve& c, double a, double b) {
    double d = 0.0;
    for (const auto& s : c.samples()) d = std::max(d, std::abs(s.r - (a * s.s + b)));
    return d;
}

} // namespace

TEST_CASE("exact solutions through the wedge edges") {
    IntegratorOptions no_tails;
    no_tails.analytic_tails = false;
    for (const auto& opt : {IntegratorOptions{}, no_tails}) {
        CHECK(max_dev(x_curve(-1.0, ConeField::strain(), opt), 1.0, 0.0) <= 1e-8);
        CHECK(max_dev(x_curve(-0.5, ConeField::strain(), opt), 0.5, 0.0) <= 1e-8);
    }
    const auto l = x_curve(-1.0);
    CHECK(l.analytic());
    CHECK(curve_value(l, -2.0) == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(curve_value(x_curve(-0.5), -4.0) == doctest::Approx(-2.0).epsilon(1e-15));
}

TEST_CASE("closed-form curves on the constant branches") {
    const auto above = x_curve(0.0); // stays in beta = 1/4
    CHECK(max_dev(above, 0.5, 0.5) <= 1e-12);
    CHECK(curve_value(above, -3.0) == doctest::Approx(-1.0).epsilon(1e-14));
    const auto below = x_curve(-3.0); // stays in beta = 1
    CHECK(max_dev(below, 1.0, -2.0) <= 1e-12);
}

TEST_CASE("Y curves escape to null infinity") {
    const auto g = ConeField::strain();
    const auto y = integrate_null(g, Family::Y, {-1.0, 0.0}, kWindow);
    // u = r/s stays below 1/2 up to s = -1/2, so the curve is a slope -1/2 line there.
    for (const auto& smp : y.samples())
        if (smp.s <= -0.5) REQUIRE(std::abs(smp.r + 0.5 * (smp.s + 1.0)) <= 1e-9);
    CHECK(!endpoint_of(g, y).attached());
    for (double t : {-3.0, -0.75, 1.0})
        CHECK(!endpoint_of(g, integrate_null(g, Family::Y, {-1.0, t}, kWindow)).attached());
}

TEST_CASE("endpoints of sample curves") {
    const auto g = ConeField::strain();
    const auto e1 = endpoint_of(g, x_curve(-1.0));
    CHECK(e1.attached());
    CHECK(e1.T == 0.0);
    REQUIRE(e1.slope_limit);
    CHECK(*e1.slope_limit == doctest::Approx(1.0));

    const auto e2 = endpoint_of(g, x_curve(0.0));
    CHECK(e2.T == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(!e2.slope_limit);

    const auto e3 = endpoint_of(g, x_curve(-0.75));
    CHECK(e3.T == 0.0);
    CHECK(e3.uncertainty == 0.0); // trapped between exact solutions
    REQUIRE(e3.slope_limit);
    CHECK(*e3.slope_limit > 0.5);
    CHECK(*e3.slope_limit < 1.0);
}

TEST_CASE("endpoint law examples and agreement with integration") {
    const auto g = ConeField::strain();
    CHECK(endpoint_law(g, -3.0) == -2.0);
    CHECK(endpoint_law(g, -0.75) == 0.0);
    CHECK(endpoint_law(g, 0.25) == 0.75);
    CHECK(endpoint_law(ConeField::minkowski(), -3.0) == -2.0);
    CHECK(endpoint_law(ConeField::narrow(), 0.0) == 0.5);
    for (int i = 0; i <= 40; ++i) {
        const double t = -3.0 + 4.0 * i / 40.0;
        const auto e = endpoint_of(g, x_curve(t));
        INFO("t = " << t);
        CHECK(std::abs(e.T - endpoint_law(g, t)) <= std::abs(kWindow.x_stop) + 1e-8);
    }
}

TEST_CASE("integrated wedge curve matches a fixed-step RK4 reference") {
    const auto g = ConeField::strain();
    for (double t : {-0.9, -0.75, -0.6}) {
        const auto c = x_curve(t);
        for (double s : {-0.5, -0.1, -0.01}) {
            INFO("t = " << t << ", s = " << s);
            CHECK(c.value(s) == doctest::Approx(rk4_reference(g, t, s, 200000)).epsilon(1e-9));
        }
    }
    // A curve crossing the transition from above.
    const auto c = x_curve(-0.45);
    CHECK(c.value(-0.2) == doctest::Approx(rk4_reference(g, -0.45, -0.2, 200000)).epsilon(1e-9));
}

TEST_CASE("non-crossing of the right-moving family") {
    cbtest::for_all(21, 60, [&](cbtest::Gen& gen, int) {
        double t1 = gen.uniform(-3.0, 1.0), t2 = gen.uniform(-3.0, 1.0);
        if (t1 == t2) return;
        if (t1 > t2) std::swap(t1, t2);
        const auto a = x_curve(t1), b = x_curve(t2);
        for (const auto* c : {&a, &b})
            for (const auto& smp : c->samples())
                if (a.covers(smp.s) && b.covers(smp.s)) REQUIRE(a.value(smp.s) < b.value(smp.s));
    });
}

TEST_CASE("wedge seeds stay trapped") {
    cbtest::for_all(22, 40, [&](cbtest::Gen& gen, int) {
        const double t = gen.uniform(-1.0, -0.5);
        if (t == -1.0) return;
        const auto c = x_curve(t);
        for (const auto& smp : c.samples()) {
            if (smp.s < -1.0) continue;
            REQUIRE(smp.r > smp.s);
            REQUIRE(smp.r < smp.s / 2.0);
        }
        CHECK(wedge_trapped(ConeField::strain(), c.s_back(), c.samples().back().r));
    });
}

TEST_CASE("flow continuity bound for s >= -1") {
    cbtest::for_all(23, 40, [&](cbtest::Gen& gen, int) {
        const double t1 = gen.uniform(-3.0, 1.0), t2 = gen.uniform(-3.0, 1.0);
        const auto a = x_curve(t1), b = x_curve(t2);
        for (const auto& smp : a.samples())
            if (smp.s >= -1.0 && b.covers(smp.s))
                REQUIRE(std::abs(smp.r - b.value(smp.s)) <= std::abs(t1 - t2) + 1e-9);
    });
}

TEST_CASE("slope limits collapse to the interior fixed point") {
    // Every wedge curve approaches the attracting root of beta(u) = u^2, so the
    // limit is 1 at t = -1, 1/2 at t = -1/2 and constant strictly between.
    const auto g = ConeField::strain();
    const double u_star = interior_slope_oracle();
    CHECK(u_star == doctest::Approx(0.708666).epsilon(1e-6));
    double prev = 2.0;
    for (int k = 0; k <= 32; ++k) {
        const double t = -1.0 + k / 64.0;
        const auto e = endpoint_of(g, x_curve(t));
        REQUIRE(e.slope_limit);
        INFO("t = " << t);
        CHECK(*e.slope_limit <= prev + 2e-3); // non-increasing in t, up to the fit resolution
        prev = *e.slope_limit;
        if (k == 0) CHECK(*e.slope_limit == doctest::Approx(1.0));
        else if (k == 32) CHECK(*e.slope_limit == doctest::Approx(0.5));
        else CHECK(*e.slope_limit == doctest::Approx(u_star).epsilon(2e-3));
    }
}

TEST_CASE("interpolation respects the slope bounds") {
    const auto g = ConeField::strain();
    const auto c = x_curve(-0.7);
    const auto smp = c.samples();
    for (std::size_t i = 0; i + 1 < smp.size(); i += 7) {
        const double s0 = smp[i].s, s1 = smp[i + 1].s;
        for (double w : {0.25, 0.5, 0.75}) {
            const double s = s0 + w * (s1 - s0);
            const double slope = (c.value(s) - smp[i].r) / (s - s0);
            REQUIRE(slope >= 0.5 - 1e-9);
            REQUIRE(slope <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("invalid windows, seeds and queries") {
    const auto g = ConeField::strain();
    CHECK_THROWS_AS(integrate_null(g, Family::X, {-1.0, 0.0}, {-10.0, 0.0}), InvalidInput);
    CHECK_THROWS_AS(integrate_null(g, Family::X, {-20.0, 0.0}, kWindow), InvalidInput);
    CHECK_THROWS_AS(integrate_null(g, Family::X, {-1.0, 0.0}, {-0.5, -1e-6}), InvalidInput);
    const auto c = x_curve(-0.75);
    CHECK_THROWS_AS(curve_value(c, 0.0), DomainError);
    CHECK_THROWS_AS(curve_value(c, -1e-9), DomainError);
    CHECK_NOTHROW(curve_value(x_curve(-1.0), -1e-9)); // analytic tail covers it
}

TEST_CASE("x curve ending at a given endpoint") {
    const IntegrationWindow w{};
    for (double T : {-2.0, -0.3, 0.3, 1.0}) {
        const auto c = x_curve_ending_at(ConeField::strain(), T, w);
        REQUIRE(c);
        CHECK(endpoint_of(ConeField::strain(), *c).T == doctest::Approx(T).epsilon(1e-12));
    }
    CHECK(!x_curve_ending_at(ConeField::strain(), 0.0, w)); // the strain shares it
    REQUIRE(x_curve_ending_at(ConeField::minkowski(), 0.0, w));
}

TEST_CASE("curve csv") {
    std::ostringstream os;
    write_curve_csv(os, x_curve(-1.0));
    const auto text = os.str();
    CHECK(text.rfind("s,r\n-10,-10\n", 0) == 0);
}
