#include "cbound/cboundary.hpp"
#include "cbound/error.hpp"

#include "property.hpp"

#include <doctest.h>

#include <cmath>

using namespace cbound;

namespace {

const Numerics kNum{};

std::vector<double> strain_seeds() {
    std::vector<double> v;
    for (int k = 0; k <= 32; ++k) v.push_back(-1.0 + k / 64.0);
    return v;
}

const std::vector<double>& grid() {
    static const auto g = comparison_grid(kNum.window);
    return g;
}

void check_boundary(const TIP& tip, double a, double b, double tol = 1e-9) {
    for (double s : grid()) REQUIRE(tip.past.boundary(s) == doctest::Approx(a * s + b).epsilon(tol));
}

} // namespace

TEST_CASE("TIPs of right-moving generators") {
    const auto g = ConeField::strain();
    const auto p1 = tip_generate(g, -1.0);
    check_boundary(p1, 1.0, 0.0);
    CHECK(p1.endpoint.attached());
    CHECK(p1.endpoint.T == 0.0);
    CHECK(*p1.endpoint.slope_limit == doctest::Approx(1.0));

    const auto p3 = tip_generate(g, -3.0);
    check_boundary(p3, 1.0, -2.0);
    CHECK(p3.endpoint.T == -2.0);

    const double T = 0.4;
    check_boundary(tip_generate(ConeField::minkowski(), T - 1.0), 1.0, T);
}

TEST_CASE("TIPs of left-moving generators") {
    const auto pj = tip_generate_J(ConeField::minkowski(), Point(0, -1));
    check_boundary(pj, -1.0, -1.0);
    CHECK(!pj.endpoint.attached());
    check_boundary(tip_generate_J(ConeField::narrow(), Point(0, -1)), -0.5, -0.5);
    // Two seeds on one left-moving null curve generate the same TIP.
    const auto g = ConeField::strain();
    const auto a = tip_generate_J(g, Point(0, -1));
    const auto b = tip_generate_J(g, Point(0.5, -2));
    CHECK(boundary_distance(a.past, b.past, grid()) <= 1e-7);
}

TEST_CASE("extended chronology on the timelike line") {
    const auto cc = ConeField::minkowski();
    const auto a = tip_generate(cc, -2.0), b = tip_generate(cc, -1.0); // endpoints -1 and 0
    const auto r = ext_chron(cc, a, b);
    CHECK(r.verdict == Verdict::True);
    CHECK(r.certificate == Certificate::Witness);
    REQUIRE(r.witness);
    CHECK(b.past.contains(*r.witness) == Ternary::Inside);
    CHECK(pastset_leq(a.past, past_of_point(cc, *r.witness), grid()).relation == Ternary::Inside);

    // The hand-checked witness (-0.4, -0.1): s - 1 <= -0.4 - |s + 0.1| for all s <= 0.25.
    const Point w(-0.4, -0.1);
    CHECK(b.past.contains(w) == Ternary::Inside);
    CHECK(pastset_leq(a.past, past_of_point(cc, w), grid()).relation == Ternary::Inside);
}

TEST_CASE("extended chronology inside the strain") {
    const auto g = ConeField::strain();
    const auto a = tip_generate(g, -1.0), b = tip_generate(g, -0.75);
    const auto ab = ext_chron(g, a, b);
    CHECK(ab.verdict == Verdict::False);
    CHECK(ab.certificate != Certificate::NoWitness);
    const auto ba = ext_chron(g, b, a);
    CHECK(ba.verdict == Verdict::False);
    CHECK(ba.certificate == Certificate::NotSubset);
    REQUIRE(ba.s_violation);
    CHECK(b.past.boundary(*ba.s_violation) >= a.past.boundary(*ba.s_violation));
}

TEST_CASE("pair classification") {
    const auto cc = ConeField::minkowski(), g = ConeField::strain();
    CHECK(classify_pair(cc, tip_generate(cc, -2.0), tip_generate(cc, -1.0)) == PairClass::TimelikeForward);
    CHECK(classify_pair(cc, tip_generate(cc, -1.0), tip_generate(cc, -2.0)) == PairClass::TimelikeBackward);
    CHECK(classify_pair(g, tip_generate(g, -1.0), tip_generate(g, -0.75)) == PairClass::Horismos);
    CHECK(classify_pair(g, tip_generate(g, -0.8), tip_generate(g, -0.8)) == PairClass::Equal);
    const auto j1 = tip_generate_J(cc, Point(0, -1)), j2 = tip_generate_J(cc, Point(1, -1));
    CHECK(classify_pair(cc, j1, j2) == PairClass::Horismos);
    CHECK(ext_chron(cc, j1, j2).certificate == Certificate::UnboundedPast);
    // i+ contains every TIP; attached ones are timelike below it, null ones horismotic.
    const auto top = i_plus(g);
    CHECK(classify_pair(g, tip_generate(g, 0.0), top) == PairClass::TimelikeForward);
    CHECK(classify_pair(g, top, tip_generate(g, 0.0)) == PairClass::TimelikeBackward);
    CHECK(classify_pair(g, tip_generate_J(g, Point(0, -1)), top) == PairClass::Horismos);
    CHECK(classify_pair(g, top, i_plus(g)) == PairClass::Equal);
}

TEST_CASE("strain pairs are horismotic in both orders") {
    const auto g = ConeField::strain();
    RelationEngine e(g, kNum);
    cbtest::for_all(41, 25, [&](cbtest::Gen& gen, int) {
        double t1 = -1.0 + gen.integer(0, 32) / 64.0, t2 = -1.0 + gen.integer(0, 32) / 64.0;
        if (t1 == t2) return;
        if (t1 > t2) std::swap(t1, t2);
        const auto a = tip_generate(g, t1, kNum), b = tip_generate(g, t2, kNum);
        const auto inc = e.leq(a, b);
        REQUIRE(inc.relation == Ternary::Inside);
        REQUIRE(inc.strict);
        REQUIRE(e.ext_chron(a, b).verdict == Verdict::False);
        REQUIRE(e.ext_chron(b, a).verdict == Verdict::False);
        REQUIRE(e.classify(a, b) == PairClass::Horismos);
    });
}

TEST_CASE("null infinity is horismotic") {
    for (const auto& m : {ConeField::minkowski(), ConeField::strain(), ConeField::narrow()}) {
        RelationEngine e(m, kNum);
        cbtest::for_all(42, 10, [&](cbtest::Gen& gen, int) {
            double c1 = gen.uniform(-2, 2), c2 = gen.uniform(-2, 2);
            if (std::abs(c1 - c2) < 1e-3) return;
            if (c1 > c2) std::swap(c1, c2);
            const auto a = tip_generate_J(m, Point(c1, -1), kNum), b = tip_generate_J(m, Point(c2, -1), kNum);
            REQUIRE(e.leq(a, b).relation == Ternary::Inside);
            const auto r = e.ext_chron(a, b);
            REQUIRE(r.verdict == Verdict::False);
            REQUIRE(r.certificate == Certificate::UnboundedPast);
            REQUIRE(e.classify(a, b) == PairClass::Horismos);
        });
    }
}

TEST_CASE("timelike line for constant metrics") {
    for (const auto& m : {ConeField::minkowski(), ConeField::narrow()}) {
        RelationEngine e(m, kNum);
        cbtest::for_all(43, 10, [&](cbtest::Gen& gen, int) {
            double T1 = gen.uniform(-2, 1), T2 = gen.uniform(-2, 1);
            if (std::abs(T1 - T2) < 1e-3) return;
            if (T1 > T2) std::swap(T1, T2);
            const auto a = tip_generate(m, T1 - m.max_slope(), kNum);
            const auto b = tip_generate(m, T2 - m.max_slope(), kNum);
            const auto r = e.ext_chron(a, b);
            REQUIRE(r.verdict == Verdict::True);
            REQUIRE(r.witness);
            REQUIRE(b.past.contains(*r.witness) == Ternary::Inside);
            REQUIRE(pastset_leq(a.past, past_of_point(m, *r.witness, kNum), grid()).relation == Ternary::Inside);
        });
    }
}

TEST_CASE("atlases") {
    std::vector<double> seeds21;
    for (int k = 0; k <= 20; ++k) seeds21.push_back(-3.0 + 0.2 * k);
    const auto cc = build_atlas(ConeField::minkowski(), seeds21, {});
    CHECK(cc.T_line.size() == 21);
    CHECK(cc.strain_groups.empty());

    auto seeds = strain_seeds();
    for (double t : {-3.0, -2.5, -2.0, -1.5, -1.2, -0.25, 0.0, 0.25, 0.5, 1.0}) seeds.push_back(t);
    const auto g = build_atlas(ConeField::strain(), seeds, {});
    REQUIRE(g.strain_groups.size() == 1);
    CHECK(g.strain_groups[0].endpoint == 0.0);
    CHECK(g.strain_groups[0].members.size() == 33);
    for (auto i : g.strain_groups[0].members) CHECK(g.tips[i].t_seed >= -1.0);
    CHECK(g.T_line.size() == 10);
    CHECK(g.endpoint_count() == 11);
    // Members ordered by inclusion.
    const auto& mem = g.strain_groups[0].members;
    for (std::size_t k = 0; k + 1 < mem.size(); ++k) CHECK(g.tips[mem[k]].t_seed < g.tips[mem[k + 1]].t_seed);

    CHECK(build_atlas(ConeField::narrow(), seeds, {}).strain_groups.empty());
    CHECK_THROWS_AS(build_atlas(ConeField::strain(), std::vector<double>{}, {}), InvalidInput);
}

TEST_CASE("quotient and isomorphism checks") {
    auto seeds = strain_seeds();
    for (double t : {-2.0, -1.5, 0.0, 0.5}) seeds.push_back(t);
    const auto g = build_atlas(ConeField::strain(), seeds, {});
    const auto q = quotient_strain(g);
    CHECK(q.strain_groups.empty());
    CHECK(q.T_line.size() == g.T_line.size() + 1);

    std::vector<double> eps;
    for (const auto& [T, i] : q.T_line) eps.push_back(T);
    const auto cc = endpoint_atlas(ConeField::minkowski(), eps, {}, {});
    const auto ca = endpoint_atlas(ConeField::narrow(), eps, {}, {});
    const auto id = [](double T) { return T; };
    CHECK(atlas_iso_check(q, cc, id).pass);
    const auto raw = atlas_iso_check(g, cc, id);
    CHECK(!raw.pass);
    CHECK(!raw.violations.empty());
    CHECK(atlas_iso_check(cc, ca, id).pass);
    // A pairing that reverses order is not an isomorphism.
    CHECK(!atlas_iso_check(cc, ca, [](double T) { return -T; }).pass);

    const auto qcc = quotient_strain(cc);
    CHECK(qcc.tips.size() == cc.tips.size());
    CHECK(qcc.T_line == cc.T_line);
}

TEST_CASE("chronological limits") {
    const auto g = ConeField::strain();
    const auto target = tip_generate(g, -0.75);
    std::vector<TIP> seq;
    for (int n : {1, 10, 100, 1000, 10000, 100000, 1000000}) seq.push_back(tip_generate(g, -0.75 - 1.0 / n));
    CHECK(chron_limit(seq, target, grid()).verdict == LimitVerdict::Converges);

    const std::vector<TIP> constant(3, target);
    CHECK(chron_limit(constant, target, grid()).verdict == LimitVerdict::Converges);

    std::vector<TIP> away;
    for (int n = 1; n <= 6; ++n) away.push_back(tip_generate(g, -3.0 - n));
    CHECK(chron_limit(away, tip_generate(g, -3.0), grid()).verdict == LimitVerdict::Diverges);

    // Monotone seed sequences converge to the TIP of the limit seed.
    cbtest::for_all(44, 6, [&](cbtest::Gen& gen, int) {
        const double t = gen.uniform(-2.0, 0.5);
        const double side = gen.coin() ? 1.0 : -1.0;
        std::vector<TIP> s;
        for (int n = 1; n <= 6; ++n) s.push_back(tip_generate(g, t + side * std::pow(10.0, -n)));
        REQUIRE(chron_limit(s, tip_generate(g, t), grid()).verdict == LimitVerdict::Converges);
    });
}

TEST_CASE("matching against an atlas") {
    const auto g = ConeField::strain();
    const auto atlas = build_atlas(g, strain_seeds(), {});
    double d = 1.0;
    const auto m = match_in_atlas(atlas, tip_generate(g, -0.75).past, grid(), 1e-6, &d);
    REQUIRE(m);
    CHECK(atlas.tips[*m].t_seed == -0.75);
    CHECK(d <= 1e-9);
    CHECK(!match_in_atlas(atlas, tip_generate(g, 0.3).past, grid(), 1e-4));
    CHECK(std::isinf(boundary_distance(PastSet::whole(), tip_generate(g, 0.0).past, grid())));
}
