#include "cbound/verify.hpp"

#include "cbound/cboundary.hpp"
#include "cbound/confmap.hpp"
#include "cbound/error.hpp"
#include "cbound/export.hpp"
#include "cbound/gridoracle.hpp"
#include "cbound/jmap.hpp"
#include "cbound/numfmt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <random>
#include <sstream>

namespace cbound {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const char* const kNames[kCriterionCount] = {
    "exact null solutions",          "endpoint law",
    "non-crossing and trapping",     "strain existence and horismos",
    "timelike line for constant metrics", "j_cc law and discontinuity",
    "j_ca collapse and composition", "quotient embedding",
    "oracle cross-validation",       "conformal map"};

// Piecewise endpoint of the X curve through (t, -1) under the strain metric,
// read off the exact lines r = s + T, r = s/2 + T and the trapping wedge.
double endpoint_oracle(double t) {
    if (t <= -1.0) return t + 1.0;
    if (t >= -0.5) return t + 0.5;
    return 0.0;
}

std::vector<double> strain_seeds(const Scenario& s) {
    std::vector<double> out;
    for (double t : s.t_seeds)
        if (t >= -1.0 && t <= -0.5) out.push_back(t);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
    return out;
}

TIP tip_ending_at(const ConeField& m, double T, const Numerics& num) {
    auto c = x_curve_ending_at(m, T, num.window, num.integrator);
    if (!c) throw InvalidInput("no unique generator ends at T = " + shortest(T));
    return tip_from_curve(m, std::make_shared<const NullCurve>(std::move(*c)), num);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

CriterionResult exact_solutions(const Scenario& sc) {
    CriterionResult r{1, kNames[0], false, 0.0, 1e-8, {}, {}, 0.0};
    const auto g = ConeField::strain();
    auto num = sc.numerics();
    num.integrator.analytic_tails = false;
    double worst = 0.0;
    for (const auto& [t, k] : {std::pair{-1.0, 1.0}, std::pair{-0.5, 0.5}}) {
        const auto c = integrate_null(g, Family::X, {-1.0, t}, num.window, num.integrator);
        double dev = 0.0;
        for (const auto& smp : c.samples()) dev = std::max(dev, std::abs(smp.r - k * smp.s));
        // Dense evaluation exercises the interpolant between samples.
        const double l0 = std::log(-num.window.s_min), l1 = std::log(-num.window.x_stop);
        for (int i = 0; i <= 2000; ++i) {
            const double s = std::clamp(-std::exp(l0 + (l1 - l0) * i / 2000.0), c.s_front(), c.s_back());
            dev = std::max(dev, std::abs(c.value(s) - k * s));
        }
        r.data.push_back({{"t", t}, {"samples", c.samples().size()}, {"max_deviation", dev}});
        worst = std::max(worst, dev);
    }
    r.measured = worst;
    r.pass = worst <= r.threshold;
    r.detail = "max |r - k s| = " + fmt(worst) + " over both seeds";
    return r;
}

CriterionResult endpoint_law_check(const Scenario& sc) {
    CriterionResult r{2, kNames[1], false, 0.0, 1e-5, {}, {}, 0.0};
    const auto g = ConeField::strain();
    const auto num = sc.numerics();
    double worst = 0.0;
    for (double t : {-3.0, -2.0, -1.2, -1.0, -0.9, -0.75, -0.6, -0.5, -0.25, 0.0, 1.0}) {
        const auto c = integrate_null(g, Family::X, {-1.0, t}, num.window, num.integrator);
        const auto e = endpoint_of(g, c);
        const double err = e.attached() ? std::abs(e.T - endpoint_oracle(t)) : kInf;
        worst = std::max(worst, err);
        r.data.push_back({{"t", t}, {"T", e.T}, {"expected", endpoint_oracle(t)}, {"error", err}});
    }
    r.measured = worst;
    r.pass = worst <= r.threshold;
    r.detail = "max |T - T_end(t)| = " + fmt(worst) + " over 11 seeds";
    return r;
}

CriterionResult noncrossing(const Scenario& sc) {
    CriterionResult r{3, kNames[2], false, 0.0, 0.0, {}, {}, 0.0};
    const auto g = ConeField::strain();
    const auto num = sc.numerics();
    std::vector<double> seeds = linspace(-3.0, 1.0, 40);
    std::vector<NullCurve> curves;
    for (double t : seeds) curves.push_back(integrate_null(g, Family::X, {-1.0, t}, num.window, num.integrator));

    std::size_t order_violations = 0, comparisons = 0;
    double min_gap = kInf;
    for (std::size_t i = 0; i < curves.size(); ++i)
        for (std::size_t j = i + 1; j < curves.size(); ++j)
            for (const auto* c : {&curves[i], &curves[j]})
                for (const auto& smp : c->samples()) {
                    if (!curves[i].covers(smp.s) || !curves[j].covers(smp.s)) continue;
                    const double gap = curves[j].value(smp.s) - curves[i].value(smp.s);
                    ++comparisons;
                    min_gap = std::min(min_gap, gap);
                    if (!(gap > 0.0)) ++order_violations;
                }

    std::vector<double> wedge;
    for (double t : seeds)
        if (t > -1.0 && t < -0.5) wedge.push_back(t);
    for (double t : strain_seeds(sc))
        if (t > -1.0 && t < -0.5) wedge.push_back(t);
    std::size_t escapes = 0, checked = 0;
    for (double t : wedge) {
        const auto c = integrate_null(g, Family::X, {-1.0, t}, num.window, num.integrator);
        for (const auto& smp : c.samples()) {
            if (smp.s < -1.0) continue; // the wedge is forward-invariant only
            ++checked;
            if (!(smp.r > smp.s && smp.r < smp.s / 2.0)) ++escapes;
        }
    }
    r.measured = static_cast<double>(order_violations + escapes);
    r.pass = order_violations == 0 && escapes == 0;
    r.data = {{"seeds", seeds.size()},
              {"comparisons", comparisons},
              {"order_violations", order_violations},
              {"min_gap", min_gap},
              {"wedge_seeds", wedge.size()},
              {"wedge_samples", checked},
              {"wedge_escapes", escapes}};
    r.detail = std::to_string(order_violations) + " order violations in " +
               std::to_string(comparisons) + " comparisons; " + std::to_string(escapes) +
               " wedge escapes in " + std::to_string(checked) + " samples";
    return r;
}

CriterionResult strain(const Scenario& sc) {
    CriterionResult r{4, kNames[3], false, 0.0, 0.0, {}, {}, 0.0};
    const auto g = ConeField::strain();
    const auto num = sc.numerics();
    const auto seeds = strain_seeds(sc);
    const auto atlas = build_atlas(g, seeds, {}, num);
    const auto grid = comparison_grid(num.window);
    RelationEngine engine(g, num);

    const std::size_t n = seeds.size();
    const bool one_group = atlas.strain_groups.size() == 1 && atlas.strain_groups[0].members.size() == n;
    bool endpoints_zero = true;
    for (const auto& t : atlas.tips)
        endpoints_zero = endpoints_zero && t.endpoint.attached() && t.endpoint.T == 0.0;

    double min_dist = kInf;
    std::size_t horismos = 0, bad_pairs = 0;
    std::vector<std::string> failures;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const auto& a = atlas.tips[i];
            const auto& b = atlas.tips[j];
            // Larger seed, larger set.
            const auto& lo = a.t_seed < b.t_seed ? a : b;
            const auto& hi = a.t_seed < b.t_seed ? b : a;
            min_dist = std::min(min_dist, boundary_distance(a.past, b.past, grid));
            const auto inc = engine.leq(lo, hi);
            const auto e_ab = engine.ext_chron(a, b);
            const auto cls = engine.classify(a, b);
            const bool ok = inc.relation == Ternary::Inside && inc.strict &&
                            e_ab.verdict == Verdict::False && cls == PairClass::Horismos;
            if (ok) ++horismos;
            else if (++bad_pairs <= 5)
                failures.push_back("seeds " + shortest(a.t_seed) + ", " + shortest(b.t_seed) + ": " +
                                   std::string(to_string(cls)) + " via " +
                                   std::string(to_string(e_ab.certificate)));
        }
    std::map<std::string, std::size_t> certs;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        ++certs[std::string(to_string(engine.ext_chron(atlas.tips[i], atlas.tips[i + 1]).certificate))];
        ++certs[std::string(to_string(engine.ext_chron(atlas.tips[i + 1], atlas.tips[i]).certificate))];
    }
    const bool distinct = min_dist > sc.boundary_tol;
    r.pass = n >= 2 && one_group && endpoints_zero && distinct && bad_pairs == 0;
    r.measured = static_cast<double>(bad_pairs);
    r.data = {{"seeds", n},
              {"strain_groups", atlas.strain_groups.size()},
              {"members", atlas.strain_groups.empty() ? 0 : atlas.strain_groups[0].members.size()},
              {"all_endpoints_zero", endpoints_zero},
              {"min_pairwise_distance", min_dist},
              {"horismos_pairs", horismos},
              {"ordered_pairs", n * (n - 1)},
              {"adjacent_certificates", certs},
              {"failures", failures}};
    r.detail = std::to_string(n) + " seeds -> " +
               std::to_string(atlas.strain_groups.empty() ? 0 : atlas.strain_groups[0].members.size()) +
               " members at endpoint 0; " + std::to_string(horismos) + "/" + std::to_string(n * (n - 1)) +
               " ordered pairs horismotic; min distance " + fmt(min_dist);
    return r;
}

CriterionResult timelike_line(const Scenario& sc) {
    CriterionResult r{5, kNames[4], false, 0.0, 0.0, {}, {}, 0.0};
    const auto num = sc.numerics();
    const auto grid = comparison_grid(num.window);
    std::size_t failures = 0, checked = 0;
    for (const auto& m : {ConeField::minkowski(), ConeField::narrow()}) {
        RelationEngine engine(m, num);
        std::mt19937_64 rng(sc.seed);
        std::uniform_real_distribution<double> U(-2.0, 1.0);
        json rows = json::array();
        for (int k = 0; k < 20; ++k) {
            double T1 = U(rng), T2 = U(rng);
            if (T1 > T2) std::swap(T1, T2);
            const auto a = tip_ending_at(m, T1, num);
            const auto b = tip_ending_at(m, T2, num);
            const auto cls = engine.classify(a, b);
            const auto e = engine.ext_chron(a, b);
            // Independent re-check of the witness: inside P2 and P1 below its past.
            bool verified = false;
            if (e.certificate == Certificate::Witness && e.witness) {
                const auto in_b = b.past.contains(*e.witness);
                const auto below = pastset_leq(a.past, past_of_point(m, *e.witness, num), grid, num.margin);
                verified = in_b == Ternary::Inside && below.relation == Ternary::Inside;
            }
            const bool ok = T1 < T2 && cls == PairClass::TimelikeForward && verified;
            ++checked;
            if (!ok) ++failures;
            rows.push_back({{"T1", T1}, {"T2", T2}, {"class", to_string(cls)}, {"witness_verified", verified}});
        }
        r.data[std::string(m.id())] = std::move(rows);
    }
    r.measured = static_cast<double>(failures);
    r.pass = failures == 0;
    r.detail = std::to_string(checked - failures) + "/" + std::to_string(checked) +
               " pairs TimelikeForward with verified witnesses";
    return r;
}

struct CcProfile {
    BoundaryAtlas target;
    JhatProfile profile;
};

CcProfile cc_profile(const Scenario& sc, const Numerics& num) {
    const auto cc = ConeField::minkowski();
    const auto g = ConeField::strain();
    std::vector<double> eps;
    for (double T : sc.T_samples)
        if (T != 0.0) eps.push_back(T);
    CcProfile out{endpoint_atlas(g, eps, strain_seeds(sc), {}, num), {}};
    SourceFamily src = [&](double T) { return tip_ending_at(cc, T, num); };
    ProfileOptions opt;
    opt.match_tol = sc.boundary_tol;
    out.profile = jhat_profile(cc, g, src, sc.T_samples, out.target, num, opt);
    return out;
}

CriterionResult jcc(const Scenario& sc) {
    CriterionResult r{6, kNames[5], false, 0.0, sc.boundary_tol, {}, {}, 0.0};
    const auto cc = ConeField::minkowski();
    const auto g = ConeField::strain();
    const auto num = sc.numerics();
    const auto grid = comparison_grid(num.window);

    double law_dev = 0.0;
    std::size_t in_range = 0;
    for (double T : sc.T_samples) {
        if (T < -2.0 || T > 1.0) continue;
        ++in_range;
        const auto Q = jhat(cc, g, tip_ending_at(cc, T, num), num);
        const auto ref = tip_generate(g, jhat_law_cc(T), num);
        law_dev = std::max(law_dev, boundary_distance(Q.past, ref.past, grid));
    }

    const auto [target, prof] = cc_profile(sc, num);
    bool break_ok = false;
    json breaks = json::array();
    for (const auto& b : prof.continuity_breaks) {
        const double L = b.left_limit ? target.tips[*b.left_limit].t_seed : std::nan("");
        const double R = b.right_limit ? target.tips[*b.right_limit].t_seed : std::nan("");
        breaks.push_back({{"at", b.at}, {"jump", b.jump},
                          {"left_limit_seed", b.left_limit ? json(L) : json(nullptr)},
                          {"right_limit_seed", b.right_limit ? json(R) : json(nullptr)}});
        if (b.at == 0.0 && b.left_limit && b.right_limit && L == -1.0 && R == -0.5) break_ok = true;
    }
    const bool single_break = prof.continuity_breaks.size() == 1;

    std::vector<double> unreached, interior;
    for (auto i : prof.unreached_targets) unreached.push_back(target.tips[i].t_seed);
    std::sort(unreached.begin(), unreached.end());
    for (double t : strain_seeds(sc))
        if (t > -1.0 && t < -0.5) interior.push_back(t);
    std::vector<double> limit_only;
    for (auto i : prof.limit_only_targets) limit_only.push_back(target.tips[i].t_seed);
    const bool unreached_ok = unreached == interior;

    r.measured = law_dev;
    r.pass = law_dev <= r.threshold && break_ok && single_break && unreached_ok &&
             prof.unmatched_sources.empty();
    r.data = {{"samples", in_range},
              {"law_max_deviation", law_dev},
              {"breaks", breaks},
              {"unreached_seeds", unreached},
              {"limit_only_seeds", limit_only},
              {"unmatched_sources", prof.unmatched_sources}};
    r.detail = "law deviation " + fmt(law_dev) + " on " + std::to_string(in_range) + " samples; " +
               std::to_string(prof.continuity_breaks.size()) + " break(s)" +
               (break_ok ? " at T=0 with limits P_-1 | P_-1/2" : "") + "; " +
               std::to_string(unreached.size()) + " unreached (strain interior " +
               std::to_string(interior.size()) + ")";
    return r;
}

CriterionResult jca(const Scenario& sc) {
    CriterionResult r{7, kNames[6], false, 0.0, 1e-6, {}, {}, 0.0};
    const auto cc = ConeField::minkowski();
    const auto g = ConeField::strain();
    const auto ca = ConeField::narrow();
    const auto num = sc.numerics();
    const auto grid = comparison_grid(num.window);
    const auto seeds = strain_seeds(sc);

    std::vector<TIP> images;
    for (double t : seeds) images.push_back(jhat(g, ca, tip_generate(g, t, num), num));
    double spread = 0.0;
    for (std::size_t i = 0; i < images.size(); ++i)
        for (std::size_t j = i + 1; j < images.size(); ++j)
            spread = std::max(spread, boundary_distance(images[i].past, images[j].past, grid));

    const auto target = endpoint_atlas(ca, std::vector<double>{0.0}, {}, {}, num);
    SourceFamily src = [&](double t) { return tip_generate(g, t, num); };
    ProfileOptions opt;
    opt.match_tol = sc.boundary_tol;
    const auto prof = jhat_profile(g, ca, src, seeds, target, num, opt);
    const std::size_t group =
        prof.non_injective_groups.size() == 1 ? prof.non_injective_groups[0].sources.size() : 0;

    const auto comp = composition_check(cc, g, ca, sc.T_samples, num, sc.boundary_tol);
    double comp_dev = 0.0;
    for (const auto& row : comp.rows) comp_dev = std::max(comp_dev, row.max_deviation);

    r.measured = spread;
    r.pass = spread <= r.threshold && group == seeds.size() && comp.pass;
    r.data = {{"strain_sources", seeds.size()},
              {"image_spread", spread},
              {"collision_group_size", group},
              {"composition_pass", comp.pass},
              {"composition_max_deviation", comp_dev},
              {"composition_iso", to_json(comp.iso)},
              {"composition_violations", comp.violations}};
    r.detail = std::to_string(seeds.size()) + " strain TIPs -> 1 image (spread " + fmt(spread) +
               "), group of " + std::to_string(group) + "; composition " +
               (comp.pass ? "pass" : "FAIL") + " on " + std::to_string(comp.rows.size()) +
               " endpoints, " + std::to_string(comp.iso.pairs_checked) + " pairs";
    return r;
}

CriterionResult quotient(const Scenario& sc) {
    CriterionResult r{8, kNames[7], false, 0.0, 0.0, {}, {}, 0.0};
    const auto g = ConeField::strain();
    const auto num = sc.numerics();
    const auto atlas = build_atlas(g, sc.t_seeds, sc.j_points(), num);
    const auto q = quotient_strain(atlas);
    std::vector<double> eps;
    for (const auto& [T, i] : q.T_line) eps.push_back(T);
    const auto cc = endpoint_atlas(ConeField::minkowski(), eps, {}, {}, num);
    const auto id = [](double T) { return T; };
    const auto with_q = atlas_iso_check(q, cc, id, num);
    const auto without = atlas_iso_check(atlas, cc, id, num);
    r.pass = with_q.pass && !without.pass;
    r.measured = static_cast<double>(with_q.violations.size());
    r.data = {{"quotient", to_json(with_q)}, {"raw", to_json(without)}};
    r.detail = std::string("quotient iso ") + (with_q.pass ? "pass" : "FAIL") + " (" +
               std::to_string(with_q.pairs_checked) + " pairs); raw iso " +
               (without.pass ? "pass (expected failure)" : "fails") +
               (without.violations.empty() ? "" : ": " + without.violations.front());
    return r;
}

CriterionResult oracle(const Scenario& sc) {
    CriterionResult r{9, kNames[8], false, 0.0, 0.0, {}, {}, 0.0};
    const auto num = sc.numerics();
    std::vector<std::future<std::pair<std::string, CrosscheckReport>>> jobs;
    for (const char* id : {"g_cc", "g", "g_ca"})
        jobs.push_back(std::async(std::launch::async, [&sc, &num, id] {
            const auto m = ConeField::from_id(id);
            const auto o = build_oracle(m, sc.oracle.box, sc.oracle.h);
            return std::pair{std::string(id), crosscheck(m, o, sc.oracle.samples, sc.seed, num)};
        }));
    std::size_t violations = 0, unsound = 0;
    std::string detail;
    for (auto& f : jobs) {
        const auto [id, rep] = f.get();
        double worst = 0.0;
        for (const auto& v : rep.violations) worst = std::max(worst, v.distance);
        violations += rep.violations.size();
        unsound += rep.unsound;
        json vs = json::array();
        for (std::size_t i = 0; i < std::min<std::size_t>(rep.violations.size(), 20); ++i) {
            const auto& v = rep.violations[i];
            vs.push_back({{"p", {v.p.t(), v.p.x()}}, {"q", {v.q.t(), v.q.x()}},
                          {"oracle", v.oracle}, {"continuous", to_string(v.continuous)},
                          {"distance", v.distance}});
        }
        r.data[id] = {{"samples", rep.samples},
                      {"agreements", rep.agreements},
                      {"disagreements", rep.disagreements},
                      {"unsound", rep.unsound},
                      {"band", rep.band},
                      {"violations", rep.violations.size()},
                      {"max_violation_distance", worst},
                      {"violation_examples", vs}};
        if (!detail.empty()) detail += "; ";
        detail += id + ": " + std::to_string(rep.disagreements) + " disagreements, " +
                  std::to_string(rep.violations.size()) + " outside band";
        if (!rep.violations.empty()) detail += " (max " + fmt(worst / sc.oracle.h) + "h)";
    }
    r.measured = static_cast<double>(violations);
    r.pass = violations == 0 && unsound == 0;
    r.detail = detail;
    return r;
}

CriterionResult conformal(const Scenario& sc) {
    CriterionResult r{10, kNames[9], false, 0.0, 1e-6, {}, {}, 0.0};
    const auto g = ConeField::strain();
    const auto num = sc.numerics();
    const auto opt = sc.confmap_options();
    const auto& c = sc.confmap;

    double gap = 0.0;
    for (const auto& row : interface_continuity(g, c.interface_xs, c.interface_eps, num, opt))
        gap = std::max({gap, row.formula_gap, row.one_sided_gap});

    // The cloud stream is offset from the oracle stream so the two never coincide.
    std::mt19937_64 rng(sc.seed + 1);
    std::uniform_real_distribution<double> T(c.cloud_box.t_min, c.cloud_box.t_max);
    std::uniform_real_distribution<double> X(c.cloud_box.x_min, c.cloud_box.x_max);
    std::size_t outside = 0, wrong_region = 0;
    for (std::size_t i = 0; i < c.cloud_points; ++i) {
        const double t = T(rng);
        const Point p(t, X(rng));
        const auto mp = params_of(g, p, num, opt);
        const auto q = map_from_params(mp);
        if (!in_target(q)) ++outside;
        else if (!in_primed(q, mp.region)) ++wrong_region;
    }

    bool x_pass = true;
    double x_excess = 0.0, x_raw = 0.0;
    for (double t : c.x_curve_seeds) {
        const auto curve = integrate_null(g, Family::X, {-1.0, t}, num.window, num.integrator);
        const auto rep = nullcheck_f(g, curve, c.null_tol, num, opt);
        x_pass = x_pass && rep.pass;
        x_excess = std::max(x_excess, rep.asserted.max_excess);
        x_raw = std::max(x_raw, rep.asserted.max_deviation);
    }
    double y_dev = 0.0, y_mean = 0.0;
    std::size_t y_segments = 0;
    for (double t : c.y_curve_seeds) {
        const auto curve = integrate_null(g, Family::Y, {-1.0, t}, num.window, num.integrator);
        const auto rep = nullcheck_f(g, curve, c.null_tol, num, opt);
        y_dev = std::max(y_dev, rep.informational.max_deviation);
        y_mean += rep.informational.mean_deviation * static_cast<double>(rep.informational.segments);
        y_segments += rep.informational.segments;
    }
    if (y_segments > 0) y_mean /= static_cast<double>(y_segments);

    r.measured = gap;
    r.pass = gap <= r.threshold && outside == 0 && wrong_region == 0 && x_pass;
    r.data = {{"interface_max_gap", gap},
              {"cloud_points", c.cloud_points},
              {"outside_target", outside},
              {"wrong_primed_region", wrong_region},
              {"x_assertions_pass", x_pass},
              {"x_max_excess", x_excess},
              {"x_max_raw_deviation", x_raw},
              {"y_informational_max_deviation", y_dev},
              {"y_informational_mean_deviation", y_mean}};
    r.detail = "interface gap " + fmt(gap) + "; " + std::to_string(outside + wrong_region) + "/" +
               std::to_string(c.cloud_points) + " misplaced images; X slope-1 " +
               (x_pass ? "pass" : "FAIL") + " (excess " + fmt(x_excess) + "); Y max deviation " +
               fmt(y_dev) + " (informational)";
    return r;
}

} // namespace

CriterionResult run_criterion(int id, const Scenario& s) {
    const auto t0 = std::chrono::steady_clock::now();
    if (id < 1 || id > kCriterionCount)
        throw InvalidInput("run_criterion: unknown criterion " + std::to_string(id));
    CriterionResult r;
    try {
        switch (id) {
    case 1: r = exact_solutions(s); break;
    case 2: r = endpoint_law_check(s); break;
    case 3: r = noncrossing(s); break;
    case 4: r = strain(s); break;
    case 5: r = timelike_line(s); break;
    case 6: r = jcc(s); break;
    case 7: r = jca(s); break;
    case 8: r = quotient(s); break;
    case 9: r = oracle(s); break;
    case 10: r = conformal(s); break;
    }
    } catch (const std::exception& e) {
        // A criterion that cannot be evaluated fails; the message is the detail.
        r = CriterionResult{id, kNames[id - 1], false, 0.0, 0.0, std::string("error: ") + e.what(), {}, 0.0};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::vector<CriterionResult> run_acceptance(const Scenario& s, std::span<const int> ids) {
    std::vector<int> todo(ids.begin(), ids.end());
    if (todo.empty())
        for (int i = 1; i <= kCriterionCount; ++i) todo.push_back(i);
    std::sort(todo.begin(), todo.end());
    todo.erase(std::unique(todo.begin(), todo.end()), todo.end());
    std::vector<std::future<CriterionResult>> jobs;
    for (int id : todo) jobs.push_back(std::async(std::launch::async, [id, &s] { return run_criterion(id, s); }));
    std::vector<CriterionResult> out;
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

json to_json(const CriterionResult& r) {
    return {{"id", r.id},           {"name", r.name},       {"pass", r.pass},
            {"measured", r.measured}, {"threshold", r.threshold}, {"detail", r.detail},
            {"data", r.data}};
}

std::string acceptance_markdown(std::span<const CriterionResult> results, const json& scenario) {
    std::ostringstream md;
    std::size_t passed = 0;
    for (const auto& r : results) passed += r.pass ? 1 : 0;
    md << "# Acceptance report\n\n"
       << passed << " of " << results.size() << " criteria pass.\n\n"
       << "| # | criterion | result | measured | threshold | detail |\n"
       << "|---|---|---|---|---|---|\n";
    for (const auto& r : results)
        md << "| " << r.id << " | " << r.name << " | " << (r.pass ? "PASS" : "FAIL") << " | "
           << shortest(r.measured) << " | " << shortest(r.threshold) << " | " << r.detail << " |\n";
    md << "\n## Scenario\n\n```json\n" << scenario.dump(2) << "\n```\n";
    return md.str();
}

} // namespace cbound
