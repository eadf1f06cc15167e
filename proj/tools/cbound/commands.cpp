#include "commands.hpp"

#include "cbound/cboundary.hpp"
#include "cbound/confmap.hpp"
#include "cbound/error.hpp"
#include "cbound/export.hpp"
#include "cbound/gridoracle.hpp"
#include "cbound/jmap.hpp"
#include "cbound/numfmt.hpp"
#include "cbound/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <future>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

namespace cbound::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string pad3(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%03zu", i);
    return buf;
}

std::vector<double> strain_seeds(const Scenario& s) {
    std::vector<double> out;
    for (double t : s.t_seeds)
        if (t >= -1.0 && t <= -0.5) out.push_back(t);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> sorted_unique(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// Endpoints of the strain-metric seeds; every metric's atlas is built on this set
// so atlases can be paired under T -> T.
std::vector<double> seed_endpoints(const Scenario& s) {
    const auto g = ConeField::strain();
    std::vector<double> e;
    for (double t : s.t_seeds) e.push_back(endpoint_law(g, t));
    return sorted_unique(std::move(e));
}

BoundaryAtlas standard_atlas(const ConeField& m, const Scenario& s, const Numerics& num) {
    if (m.kind() == MetricKind::Strain) return build_atlas(m, s.t_seeds, s.j_points(), num);
    return endpoint_atlas(m, seed_endpoints(s), {}, s.j_points(), num);
}

TIP tip_ending_at(const ConeField& m, double T, const Numerics& num) {
    auto c = x_curve_ending_at(m, T, num.window, num.integrator);
    if (!c) throw InvalidInput("no unique generator ends at T = " + shortest(T));
    return tip_from_curve(m, std::make_shared<const NullCurve>(std::move(*c)), num);
}

struct Report {
    std::ostringstream md;
    bool ok = true;

    void check(bool pass, const std::string& what) {
        md << "- " << (pass ? "PASS" : "FAIL") << ": " << what << "\n";
        ok = ok && pass;
    }
    std::string finish(const json& scenario) const {
        return md.str() + "\n## Scenario\n\n```json\n" + scenario.dump(2) + "\n```\n";
    }
};

} // namespace

Scenario resolve_scenario(const Overrides& o) {
    json j = json::object();
    if (o.config) {
        std::ifstream in(*o.config);
        if (!in) throw ConfigError("cannot open config '" + *o.config + "'");
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError("config '" + *o.config + "': " + e.what());
        }
    }
    Scenario s = scenario_from_json(j);
    if (o.out) s.out_dir = *o.out;
    if (o.tol) s.tol = *o.tol;
    if (o.seed) s.seed = *o.seed;
    validate(s);
    return s;
}

int cmd_curves(const Scenario& s, const fs::path& out, std::ostream& log) {
    const auto m = ConeField::from_id(s.curve_metric);
    const auto num = s.numerics();
    const auto sj = to_json(s);
    const fs::path dir = out / "curves";

    struct Job {
        Family family;
        double t;
    };
    std::vector<Job> jobs;
    for (double t : s.t_seeds) jobs.push_back({Family::X, t});
    for (double t : s.y_seeds) jobs.push_back({Family::Y, t});

    std::vector<std::future<NullCurve>> futs;
    for (const auto& jb : jobs)
        futs.push_back(std::async(std::launch::async, [&m, &num, jb] {
            return integrate_null(m, jb.family, {-1.0, jb.t}, num.window, num.integrator);
        }));

    json index = json::array();
    Report rep;
    rep.md << "# curves\n\nMetric `" << s.curve_metric << "`, window [" << shortest(s.s_min) << ", "
           << shortest(s.x_stop) << "], tol " << shortest(s.tol) << ".\n\n"
           << "| file | family | t | samples | exact line | endpoint |\n|---|---|---|---|---|---|\n";
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const auto c = futs[i].get();
        const std::string file = std::string(to_string(jobs[i].family)) + "_" + pad3(i) + ".csv";
        write_csv(dir / file, sj, [&](std::ostream& os) { write_curve_csv(os, c); });
        const auto e = endpoint_of(m, c);
        index.push_back({{"file", file},
                         {"family", to_string(jobs[i].family)},
                         {"seed", {{"s", -1.0}, {"r", jobs[i].t}}},
                         {"samples", c.samples().size()},
                         {"analytic", c.analytic()},
                         {"endpoint", to_json(e)}});
        rep.md << "| " << file << " | " << to_string(jobs[i].family) << " | " << shortest(jobs[i].t)
               << " | " << c.samples().size() << " | " << (c.analytic() ? "yes" : "no") << " | "
               << (e.attached() ? shortest(e.T) : std::string("infinity")) << " |\n";
    }
    write_json(dir / "index.json", {{"scenario", sj}, {"curves", index}});
    write_file(dir / "report.md", rep.finish(sj));
    log << "curves: " << jobs.size() << " curve files + index.json in " << dir.string() << "\n";
    return kOk;
}

int cmd_boundary(const Scenario& s, const fs::path& out, std::ostream& log) {
    const auto num = s.numerics();
    const auto sj = to_json(s);
    const fs::path dir = out / "boundary";
    const auto grid = comparison_grid(num.window);

    std::vector<std::future<std::pair<BoundaryAtlas, RelationMatrix>>> futs;
    for (const auto& id : s.metrics)
        futs.push_back(std::async(std::launch::async, [&s, &num, id] {
            const auto m = ConeField::from_id(id);
            auto atlas = standard_atlas(m, s, num);
            RelationEngine engine(m, num);
            auto rel = relation_matrix(engine, atlas);
            return std::pair{std::move(atlas), std::move(rel)};
        }));
    std::map<std::string, BoundaryAtlas> atlases;
    Report rep;
    rep.md << "# boundary\n\n";
    json summary = json::object();
    for (std::size_t k = 0; k < s.metrics.size(); ++k) {
        auto [atlas, rel] = futs[k].get();
        const auto& id = s.metrics[k];
        std::size_t indeterminate = 0;
        std::map<std::string, std::size_t> counts;
        for (const auto& row : rel.cls)
            for (auto c : row) {
                ++counts[std::string(to_string(c))];
                indeterminate += c == PairClass::Indeterminate ? 1 : 0;
            }
        json aj = atlas_json(atlas, grid);
        write_json(dir / ("atlas_" + id + ".json"),
                   {{"scenario", sj}, {"atlas", aj}, {"relations", relation_json(atlas, rel)}});
        write_csv(dir / ("relations_" + id + ".csv"), sj,
                  [&](std::ostream& os) { write_relation_csv(os, atlas, rel); });

        rep.md << "## " << id << "\n\n" << atlas.tips.size() << " TIPs, " << atlas.T_line.size()
               << " singleton endpoints, " << atlas.strain_groups.size() << " strain(s), "
               << atlas.jplus.size() << " null-infinity TIPs.\n\n";
        rep.check(indeterminate == 0, id + ": no indeterminate pair (" +
                                          std::to_string(rel.order.size()) + " rows)");
        if (id == "g") {
            const std::size_t expect = strain_seeds(s).size();
            if (expect >= 2) {
                const bool one = atlas.strain_groups.size() == 1 &&
                                 atlas.strain_groups[0].members.size() == expect &&
                                 atlas.strain_groups[0].endpoint == 0.0;
                rep.check(one, "g: one strain at endpoint 0 with " + std::to_string(expect) + " members");
            }
        } else {
            rep.check(atlas.strain_groups.empty(), id + ": no strain");
        }
        rep.md << "\n";
        summary[id] = {{"tips", atlas.tips.size()},
                       {"T_line", atlas.T_line.size()},
                       {"strain_groups", aj["strain_groups"]},
                       {"jplus", atlas.jplus.size()},
                       {"classes", counts},
                       {"indeterminate", indeterminate}};
        atlases.emplace(id, std::move(atlas));
    }

    const auto id_map = [](double T) { return T; };
    json iso = json::object();
    rep.md << "## Isomorphisms under T -> T\n\n";
    if (atlases.count("g_ca") && atlases.count("g_cc")) {
        const auto r = atlas_iso_check(atlases.at("g_ca"), atlases.at("g_cc"), id_map, num);
        iso["g_ca~g_cc"] = to_json(r);
        rep.check(r.pass, "g_ca atlas isomorphic to g_cc atlas (" + std::to_string(r.pairs_checked) + " pairs)");
    }
    if (atlases.count("g") && atlases.count("g_cc")) {
        const auto q = atlas_iso_check(quotient_strain(atlases.at("g")), atlases.at("g_cc"), id_map, num);
        iso["quotient(g)~g_cc"] = to_json(q);
        rep.check(q.pass, "strain quotient of g isomorphic to g_cc (" + std::to_string(q.pairs_checked) + " pairs)");
        const auto raw = atlas_iso_check(atlases.at("g"), atlases.at("g_cc"), id_map, num);
        iso["g~g_cc"] = to_json(raw);
        if (!atlases.at("g").strain_groups.empty())
            rep.check(!raw.pass, "g itself is not isomorphic to g_cc" +
                                     (raw.violations.empty() ? std::string() : ": " + raw.violations.front()));
    }
    write_json(dir / "boundary.json", {{"scenario", sj}, {"summary", summary}, {"isomorphisms", iso}, {"pass", rep.ok}});
    write_file(dir / "report.md", rep.finish(sj));
    log << "boundary: " << (rep.ok ? "all invariants hold" : "invariant FAILED") << "; outputs in "
        << dir.string() << "\n";
    return rep.ok ? kOk : kClaimFailed;
}

int cmd_jmap(const Scenario& s, const fs::path& out, std::ostream& log) {
    const auto num = s.numerics();
    const auto sj = to_json(s);
    const fs::path dir = out / "jmap";
    const auto grid = comparison_grid(num.window);
    ProfileOptions opt;
    opt.match_tol = s.boundary_tol;

    Report rep;
    rep.md << "# jmap\n\n";
    json pairs = json::array();
    for (const auto& [id1, id2] : s.jmap_pairs) {
        const auto m1 = ConeField::from_id(id1);
        const auto m2 = ConeField::from_id(id2);
        // Source TIPs are parametrized by endpoint for constant metrics and by
        // seed for the strain metric.
        const bool by_seed = m1.kind() == MetricKind::Strain;
        std::vector<double> samples = by_seed ? sorted_unique(s.t_seeds) : s.T_samples;
        SourceFamily src = by_seed ? SourceFamily([&](double t) { return tip_generate(m1, t, num); })
                                   : SourceFamily([&](double T) { return tip_ending_at(m1, T, num); });
        std::vector<double> E;
        for (double x : samples) E.push_back(by_seed ? endpoint_law(m1, x) : x);
        E = sorted_unique(std::move(E));
        BoundaryAtlas target = [&] {
            if (m2.kind() != MetricKind::Strain) return endpoint_atlas(m2, E, {}, {}, num);
            std::vector<double> nonzero;
            for (double T : E)
                if (T != 0.0) nonzero.push_back(T);
            return endpoint_atlas(m2, nonzero, strain_seeds(s), {}, num);
        }();
        const auto prof = jhat_profile(m1, m2, src, samples, target, num, opt);

        auto seed_of = [&](std::size_t i) { return target.tips[i].t_seed; };
        auto endpoint_of_tip = [&](std::size_t i) { return target.tips[i].endpoint.T; };
        json rows = json::array();
        for (const auto& r : prof.rows)
            rows.push_back({{"source", r.source},
                            {"image_T", r.image_T},
                            {"match_seed", r.match ? json(seed_of(*r.match)) : json(nullptr)},
                            {"match_distance", r.match_distance}});
        json breaks = json::array();
        for (const auto& b : prof.continuity_breaks)
            breaks.push_back({{"at", b.at},
                              {"jump", b.jump},
                              {"left_limit_seed", b.left_limit ? json(seed_of(*b.left_limit)) : json(nullptr)},
                              {"right_limit_seed", b.right_limit ? json(seed_of(*b.right_limit)) : json(nullptr)}});
        json groups = json::array();
        for (const auto& g : prof.non_injective_groups)
            groups.push_back({{"sources", g.sources}, {"image_T", g.image_T}, {"size", g.sources.size()}});
        std::vector<double> unreached, limit_only, unreached_T;
        for (auto i : prof.unreached_targets) {
            unreached.push_back(seed_of(i));
            unreached_T.push_back(endpoint_of_tip(i));
        }
        for (auto i : prof.limit_only_targets) limit_only.push_back(seed_of(i));
        std::sort(unreached.begin(), unreached.end());
        std::sort(limit_only.begin(), limit_only.end());

        const std::string name = id1 + "_to_" + id2;
        const json pj{{"source", id1},
                      {"target", id2},
                      {"parameter", by_seed ? "seed" : "endpoint"},
                      {"rows", rows},
                      {"continuity_breaks", breaks},
                      {"non_injective_groups", groups},
                      {"unreached_target_seeds", unreached},
                      {"limit_only_target_seeds", limit_only},
                      {"unmatched_sources", prof.unmatched_sources}};
        write_json(dir / ("profile_" + name + ".json"), {{"scenario", sj}, {"profile", pj}});
        write_csv(dir / ("profile_" + name + ".csv"), sj, [&](std::ostream& os) {
            os << "source,image_T,match_seed,match_distance\n";
            for (const auto& r : prof.rows)
                os << shortest(r.source) << ',' << shortest(r.image_T) << ','
                   << (r.match ? shortest(seed_of(*r.match)) : std::string()) << ','
                   << shortest(r.match_distance) << '\n';
        });
        pairs.push_back(pj);

        rep.md << "## " << id1 << " -> " << id2 << "\n\n"
               << prof.rows.size() << " sources, " << prof.continuity_breaks.size() << " break(s), "
               << prof.non_injective_groups.size() << " collision group(s), " << unreached.size()
               << " unreached and " << limit_only.size() << " limit-only target(s), "
               << prof.unmatched_sources.size() << " unmatched source(s).\n\n";
        rep.check(prof.unmatched_sources.empty(), "every image matches a target TIP");
        if (id1 == "g_cc" && id2 == "g") {
            bool at_zero = false;
            for (const auto& b : prof.continuity_breaks)
                at_zero = at_zero || (b.at == 0.0 && b.left_limit && b.right_limit &&
                                      seed_of(*b.left_limit) == -1.0 && seed_of(*b.right_limit) == -0.5);
            rep.check(prof.continuity_breaks.size() == 1 && at_zero,
                      "single break at T = 0 with one-sided limits P_-1 and P_-1/2");
            std::vector<double> interior;
            for (double t : strain_seeds(s))
                if (t > -1.0 && t < -0.5) interior.push_back(t);
            rep.check(unreached == interior, "unreached targets are exactly the " +
                                                 std::to_string(interior.size()) + " strain interior seeds");
        }
        if (id1 == "g" && m2.kind() != MetricKind::Strain) {
            const auto strain = strain_seeds(s);
            bool found = strain.size() < 2;
            for (const auto& g : prof.non_injective_groups)
                found = found || g.sources == strain;
            rep.check(found, "all " + std::to_string(strain.size()) + " strain TIPs collide in one image");
        }
        rep.md << "\n";
    }

    const auto cc = ConeField::minkowski(), g = ConeField::strain(), ca = ConeField::narrow();
    const auto comp = composition_check(cc, g, ca, s.T_samples, num, s.boundary_tol);
    json comp_rows = json::array();
    for (const auto& r : comp.rows)
        comp_rows.push_back({{"T", r.T}, {"image_T", r.image_T}, {"max_deviation", r.max_deviation}});
    rep.md << "## Composition g_cc -> g -> g_ca\n\n";
    rep.check(comp.pass, "composition is the order isomorphism T -> T on " +
                             std::to_string(comp.rows.size()) + " endpoints");

    const auto atlas_g = standard_atlas(g, s, num);
    const auto atlas_cc = standard_atlas(cc, s, num);
    const auto id_map = [](double T) { return T; };
    const auto q = atlas_iso_check(quotient_strain(atlas_g), atlas_cc, id_map, num);
    rep.md << "\n## Strain quotient\n\n";
    rep.check(q.pass, "quotient of the g atlas is isomorphic to the g_cc atlas");

    write_json(dir / "jmap.json", {{"scenario", sj},
                                   {"pairs", pairs},
                                   {"composition", {{"pass", comp.pass},
                                                    {"rows", comp_rows},
                                                    {"iso", to_json(comp.iso)},
                                                    {"violations", comp.violations}}},
                                   {"quotient_iso", to_json(q)},
                                   {"pass", rep.ok}});
    write_file(dir / "report.md", rep.finish(sj));
    log << "jmap: " << (rep.ok ? "all claims reproduced" : "claim FAILED") << "; outputs in " << dir.string()
        << "\n";
    return rep.ok ? kOk : kClaimFailed;
}

int cmd_confmap(const Scenario& s, const fs::path& out, std::ostream& log) {
    const auto g = ConeField::strain();
    const auto num = s.numerics();
    const auto opt = s.confmap_options();
    const auto sj = to_json(s);
    const auto& c = s.confmap;
    const fs::path dir = out / "confmap";
    Report rep;
    rep.md << "# confmap\n\n";

    std::mt19937_64 rng(s.seed + 1);
    std::uniform_real_distribution<double> T(c.cloud_box.t_min, c.cloud_box.t_max);
    std::uniform_real_distribution<double> X(c.cloud_box.x_min, c.cloud_box.x_max);
    std::size_t outside = 0, wrong = 0;
    std::map<std::string, std::size_t> per_region;
    std::ostringstream cloud;
    cloud << "t,x,region,alpha,r,t_end,ft,fx,in_target,in_primed\n";
    for (std::size_t i = 0; i < c.cloud_points; ++i) {
        const double t = T(rng);
        const Point p(t, X(rng));
        const auto mp = params_of(g, p, num, opt);
        const auto q = map_from_params(mp);
        const bool in = in_target(q), primed = in_primed(q, mp.region);
        outside += in ? 0 : 1;
        wrong += in && !primed ? 1 : 0;
        ++per_region[std::string(to_string(mp.region))];
        cloud << shortest(p.t()) << ',' << shortest(p.x()) << ',' << to_string(mp.region) << ','
              << shortest(mp.alpha) << ',' << shortest(mp.r) << ',' << shortest(mp.t_end) << ','
              << shortest(q.t) << ',' << shortest(q.x) << ',' << in << ',' << primed << '\n';
    }
    write_csv(dir / "cloud.csv", sj, [&](std::ostream& os) { os << cloud.str(); });
    rep.check(outside == 0 && wrong == 0, std::to_string(c.cloud_points) + " cloud images inside V' in the matching primed region (" +
                                              std::to_string(outside) + " outside, " + std::to_string(wrong) + " misplaced)");

    const auto rows = interface_continuity(g, c.interface_xs, c.interface_eps, num, opt);
    json iface = json::array();
    double gap = 0.0;
    for (const auto& r : rows) {
        gap = std::max({gap, r.formula_gap, r.one_sided_gap});
        iface.push_back({{"x", r.x}, {"edge", r.upper ? "r=s/2" : "r=s"},
                         {"formula_gap", r.formula_gap}, {"one_sided_gap", r.one_sided_gap}});
    }
    rep.check(gap <= 1e-6, "interface continuity, max gap " + shortest(gap) + " <= 1e-6");

    json checks = json::array();
    auto stats_json = [](const SegmentStats& st) {
        return json{{"segments", st.segments}, {"max_deviation", st.max_deviation},
                    {"mean_deviation", st.mean_deviation}, {"max_excess", st.max_excess}};
    };
    bool x_ok = true;
    std::size_t k = 0;
    for (const auto& [fam, seeds] : {std::pair{Family::X, &c.x_curve_seeds}, std::pair{Family::Y, &c.y_curve_seeds}})
        for (double t : *seeds) {
            const auto curve = integrate_null(g, fam, {-1.0, t}, num.window, num.integrator);
            const auto nc = nullcheck_f(g, curve, c.null_tol, num, opt);
            if (fam == Family::X) x_ok = x_ok && nc.pass;
            const std::string file = "image_" + std::string(to_string(fam)) + "_" + pad3(k++) + ".csv";
            write_csv(dir / file, sj, [&](std::ostream& os) {
                os << "s,r,ft,fx\n";
                for (const auto& smp : curve.samples()) {
                    const auto q = map_f(g, Point(smp.r, smp.s), num, opt);
                    os << shortest(smp.s) << ',' << shortest(smp.r) << ',' << shortest(q.t) << ','
                       << shortest(q.x) << '\n';
                }
            });
            checks.push_back({{"family", to_string(fam)}, {"t", t}, {"file", file},
                              {"asserted", stats_json(nc.asserted)},
                              {"informational", stats_json(nc.informational)},
                              {"degenerate", nc.degenerate},
                              {"pass", fam == Family::X ? json(nc.pass) : json(nullptr)}});
        }
    rep.check(x_ok, "right-moving null curves map to slope-1 curves in B and C within " + shortest(c.null_tol));
    rep.md << "\nLeft-moving images are reported without assertion (see `confmap.json`).\n";

    write_json(dir / "confmap.json", {{"scenario", sj},
                                      {"cloud", {{"points", c.cloud_points}, {"outside_target", outside},
                                                 {"wrong_primed_region", wrong}, {"regions", per_region}}},
                                      {"interfaces", iface},
                                      {"nullchecks", checks},
                                      {"pass", rep.ok}});
    write_file(dir / "report.md", rep.finish(sj));
    log << "confmap: " << (rep.ok ? "all assertions hold" : "assertion FAILED") << "; outputs in "
        << dir.string() << "\n";
    return rep.ok ? kOk : kClaimFailed;
}

int cmd_oracle_check(const Scenario& s, const fs::path& out, std::ostream& log) {
    const auto num = s.numerics();
    const auto sj = to_json(s);
    const fs::path dir = out / "oracle";
    std::vector<std::future<CrosscheckReport>> futs;
    for (const auto& id : s.metrics)
        futs.push_back(std::async(std::launch::async, [&s, &num, id] {
            const auto m = ConeField::from_id(id);
            return crosscheck(m, build_oracle(m, s.oracle.box, s.oracle.h), s.oracle.samples, s.seed, num);
        }));
    Report rep;
    rep.md << "# oracle-check\n\nLattice spacing h = " << shortest(s.oracle.h) << ", band 2h.\n\n";
    json res = json::object();
    std::ostringstream viol;
    viol << "metric,p_t,p_x,q_t,q_x,oracle,continuous,distance\n";
    for (std::size_t k = 0; k < s.metrics.size(); ++k) {
        const auto r = futs[k].get();
        const auto& id = s.metrics[k];
        double worst = 0.0;
        for (const auto& v : r.violations) {
            worst = std::max(worst, v.distance);
            viol << id << ',' << shortest(v.p.t()) << ',' << shortest(v.p.x()) << ',' << shortest(v.q.t())
                 << ',' << shortest(v.q.x()) << ',' << v.oracle << ',' << to_string(v.continuous) << ','
                 << shortest(v.distance) << '\n';
        }
        res[id] = {{"samples", r.samples}, {"agreements", r.agreements},
                   {"disagreements", r.disagreements}, {"unsound", r.unsound},
                   {"band", r.band}, {"violations", r.violations.size()},
                   {"max_violation_distance", worst}};
        rep.check(r.unsound == 0, id + ": oracle positives are never continuous negatives");
        rep.check(r.violations.empty(), id + ": " + std::to_string(r.disagreements) + " disagreements, " +
                                            std::to_string(r.violations.size()) + " outside the band" +
                                            (r.violations.empty() ? "" : " (max distance " + shortest(worst) + ")"));
    }
    write_json(dir / "crosscheck.json", {{"scenario", sj}, {"metrics", res}, {"pass", rep.ok}});
    write_csv(dir / "violations.csv", sj, [&](std::ostream& os) { os << viol.str(); });
    write_file(dir / "report.md", rep.finish(sj));
    log << "oracle-check: " << (rep.ok ? "no violations" : "violations found") << "; outputs in "
        << dir.string() << "\n";
    return rep.ok ? kOk : kClaimFailed;
}

int cmd_verify(const Scenario& s, const fs::path& out, std::ostream& log) {
    const auto sj = to_json(s);
    const fs::path dir = out / "verify";
    const auto results = run_acceptance(s);
    json arr = json::array();
    bool ok = true;
    for (const auto& r : results) {
        arr.push_back(to_json(r));
        ok = ok && r.pass;
        log << (r.pass ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.name << ": " << r.detail << "\n";
    }
    write_json(dir / "acceptance.json", {{"scenario", sj}, {"criteria", arr}, {"pass", ok}});
    write_file(dir / "report.md", acceptance_markdown(results, sj));
    log << "verify: " << (ok ? "all criteria pass" : "some criteria FAIL") << "; report in "
        << (dir / "report.md").string() << "\n";
    return ok ? kOk : kClaimFailed;
}

int run(int argc, const char* const* argv, std::ostream& log, std::ostream& err) {
    CLI::App app{"Causal boundary laboratory: null flows, TIPs, boundary atlases and maps"};
    app.require_subcommand(1);
    app.fallthrough();
    Overrides o;
    std::string config, out;
    double tol = 0.0;
    std::uint64_t seed = 0;
    auto* o_config = app.add_option("--config", config, "scenario JSON; defaults apply to absent keys");
    auto* o_out = app.add_option("--out", out, "output directory (created if missing)");
    auto* o_tol = app.add_option("--tol", tol, "integrator tolerance");
    auto* o_seed = app.add_option("--seed", seed, "RNG seed for sampled checks");

    using Cmd = int (*)(const Scenario&, const fs::path&, std::ostream&);
    const std::vector<std::tuple<const char*, const char*, Cmd>> cmds{
        {"curves", "integrate the null families and write one CSV per curve", cmd_curves},
        {"boundary", "build boundary atlases and relation matrices", cmd_boundary},
        {"jmap", "profile the maps between boundaries", cmd_jmap},
        {"confmap", "map a point cloud and null curves through f", cmd_confmap},
        {"oracle-check", "cross-check chronology against the lattice oracle", cmd_oracle_check},
        {"verify", "run every acceptance criterion", cmd_verify}};
    std::map<CLI::App*, Cmd> dispatch;
    for (const auto& [name, help, fn] : cmds) dispatch[app.add_subcommand(name, help)] = fn;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, log, err) == 0 ? kOk : kConfigError;
    }
    if (*o_config) o.config = config;
    if (*o_out) o.out = out;
    if (*o_tol) o.tol = tol;
    if (*o_seed) o.seed = seed;

    try {
        const auto s = resolve_scenario(o);
        for (const auto& [sub, fn] : dispatch)
            if (sub->parsed()) return fn(s, fs::path(s.out_dir), log);
        return kConfigError;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const ContractViolation& e) {
        err << "contract violation: " << e.what() << "\n";
        return kConfigError;
    } catch (const InvalidInput& e) {
        err << "invalid input: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kClaimFailed;
    }
}

} // namespace cbound::cli
