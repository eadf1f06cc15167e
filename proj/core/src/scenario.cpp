#include "cbound/scenario.hpp"

#include "cbound/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <string_view>

namespace cbound {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why) {
    throw ConfigError("scenario." + field + ": " + why);
}

void check_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> known) {
    if (!j.is_object()) bad(std::string(where), "expected an object");
    for (const auto& [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            bad(std::string(where).empty() ? key : std::string(where) + "." + key, "unknown key");
}

template <class T>
T get(const json& j, const std::string& field) {
    try {
        return j.get<T>();
    } catch (const json::exception& e) {
        bad(field, e.what());
    }
}

BBox box_from(const json& j, const std::string& field) {
    const auto v = get<std::vector<double>>(j, field);
    if (v.size() != 4) bad(field, "expected [t_min, t_max, x_min, x_max]");
    return {v[0], v[1], v[2], v[3]};
}

json box_to(const BBox& b) { return json::array({b.t_min, b.t_max, b.x_min, b.x_max}); }

std::string_view angle_name(WedgeAngle a) {
    return a == WedgeAngle::SeedAffine ? "seed_affine" : "arrival_slope";
}
std::string_view radius_name(WedgeRadius r) {
    return r == WedgeRadius::Blended ? "blended" : "half_line";
}

void check_box(const BBox& b, const std::string& field) {
    if (!std::isfinite(b.t_min) || !std::isfinite(b.t_max) || !std::isfinite(b.x_min) ||
        !std::isfinite(b.x_max))
        bad(field, "non-finite bound");
    if (!(b.t_min < b.t_max) || !(b.x_min < b.x_max)) bad(field, "empty box");
    if (!(b.x_max < 0.0)) bad(field, "x_max must be < 0");
}

void check_finite(const std::vector<double>& v, const std::string& field) {
    for (double x : v)
        if (!std::isfinite(x)) bad(field, "non-finite entry");
}

void check_metric(const std::string& id, const std::string& field) {
    if (id != "g_cc" && id != "g" && id != "g_ca") bad(field, "unknown metric '" + id + "'");
}

} // namespace

Numerics Scenario::numerics() const {
    Numerics n;
    n.window = {s_min, x_stop};
    n.integrator.tol = tol;
    n.integrator.max_relative_spacing = max_relative_spacing;
    n.margin = margin;
    return n;
}

ConfmapOptions Scenario::confmap_options() const { return {confmap.angle, confmap.radius}; }

std::vector<Point> Scenario::j_points() const {
    std::vector<Point> out;
    for (const auto& [t, x] : j_seeds) out.emplace_back(t, x);
    return out;
}

Scenario default_scenario() {
    Scenario s;
    for (int k = 0; k <= 32; ++k) s.t_seeds.push_back(-1.0 + k / 64.0);
    for (double t : {-3.0, -2.5, -2.0, -1.5, -1.2, -0.25, 0.0, 0.25, 0.5, 1.0}) s.t_seeds.push_back(t);
    s.j_seeds = {{0.0, -1.0}, {0.5, -1.0}, {1.0, -1.0}};
    for (int k = 0; k <= 20; ++k) s.T_samples.push_back((k - 20) / 10.0);
    for (int k = 1; k <= 20; ++k) s.T_samples.push_back(k / 20.0);
    return s;
}

Scenario scenario_from_json(const json& j) {
    Scenario s = default_scenario();
    check_keys(j, "", {"metrics", "curve_metric", "t_seeds", "y_seeds", "j_seeds", "integrator",
                       "margin", "boundary_tol", "jmap", "oracle", "confmap", "seed", "out_dir"});
    if (j.contains("metrics")) s.metrics = get<std::vector<std::string>>(j["metrics"], "metrics");
    if (j.contains("curve_metric")) s.curve_metric = get<std::string>(j["curve_metric"], "curve_metric");
    if (j.contains("t_seeds")) s.t_seeds = get<std::vector<double>>(j["t_seeds"], "t_seeds");
    if (j.contains("y_seeds")) s.y_seeds = get<std::vector<double>>(j["y_seeds"], "y_seeds");
    if (j.contains("j_seeds"))
        s.j_seeds = get<std::vector<std::array<double, 2>>>(j["j_seeds"], "j_seeds");
    if (j.contains("integrator")) {
        const auto& ji = j["integrator"];
        check_keys(ji, "integrator", {"tol", "x_stop", "s_min", "max_relative_spacing"});
        if (ji.contains("tol")) s.tol = get<double>(ji["tol"], "integrator.tol");
        if (ji.contains("x_stop")) s.x_stop = get<double>(ji["x_stop"], "integrator.x_stop");
        if (ji.contains("s_min")) s.s_min = get<double>(ji["s_min"], "integrator.s_min");
        if (ji.contains("max_relative_spacing"))
            s.max_relative_spacing =
                get<double>(ji["max_relative_spacing"], "integrator.max_relative_spacing");
    }
    if (j.contains("margin")) s.margin = get<double>(j["margin"], "margin");
    if (j.contains("boundary_tol")) s.boundary_tol = get<double>(j["boundary_tol"], "boundary_tol");
    if (j.contains("jmap")) {
        const auto& jj = j["jmap"];
        check_keys(jj, "jmap", {"pairs", "T_samples"});
        if (jj.contains("pairs")) {
            s.jmap_pairs.clear();
            for (const auto& p : get<std::vector<std::vector<std::string>>>(jj["pairs"], "jmap.pairs")) {
                if (p.size() != 2) bad("jmap.pairs", "each pair is [source, target]");
                s.jmap_pairs.emplace_back(p[0], p[1]);
            }
        }
        if (jj.contains("T_samples")) s.T_samples = get<std::vector<double>>(jj["T_samples"], "jmap.T_samples");
    }
    if (j.contains("oracle")) {
        const auto& jo = j["oracle"];
        check_keys(jo, "oracle", {"box", "h", "samples"});
        if (jo.contains("box")) s.oracle.box = box_from(jo["box"], "oracle.box");
        if (jo.contains("h")) s.oracle.h = get<double>(jo["h"], "oracle.h");
        if (jo.contains("samples")) s.oracle.samples = get<std::size_t>(jo["samples"], "oracle.samples");
    }
    if (j.contains("confmap")) {
        const auto& jc = j["confmap"];
        check_keys(jc, "confmap", {"cloud_box", "cloud_points", "interface_xs", "interface_eps",
                                   "null_tol", "x_curve_seeds", "y_curve_seeds", "angle", "radius"});
        auto& c = s.confmap;
        if (jc.contains("cloud_box")) c.cloud_box = box_from(jc["cloud_box"], "confmap.cloud_box");
        if (jc.contains("cloud_points"))
            c.cloud_points = get<std::size_t>(jc["cloud_points"], "confmap.cloud_points");
        if (jc.contains("interface_xs"))
            c.interface_xs = get<std::vector<double>>(jc["interface_xs"], "confmap.interface_xs");
        if (jc.contains("interface_eps"))
            c.interface_eps = get<double>(jc["interface_eps"], "confmap.interface_eps");
        if (jc.contains("null_tol")) c.null_tol = get<double>(jc["null_tol"], "confmap.null_tol");
        if (jc.contains("x_curve_seeds"))
            c.x_curve_seeds = get<std::vector<double>>(jc["x_curve_seeds"], "confmap.x_curve_seeds");
        if (jc.contains("y_curve_seeds"))
            c.y_curve_seeds = get<std::vector<double>>(jc["y_curve_seeds"], "confmap.y_curve_seeds");
        if (jc.contains("angle")) {
            const auto a = get<std::string>(jc["angle"], "confmap.angle");
            if (a == "seed_affine") c.angle = WedgeAngle::SeedAffine;
            else if (a == "arrival_slope") c.angle = WedgeAngle::ArrivalSlope;
            else bad("confmap.angle", "expected seed_affine or arrival_slope");
        }
        if (jc.contains("radius")) {
            const auto r = get<std::string>(jc["radius"], "confmap.radius");
            if (r == "blended") c.radius = WedgeRadius::Blended;
            else if (r == "half_line") c.radius = WedgeRadius::HalfLine;
            else bad("confmap.radius", "expected blended or half_line");
        }
    }
    if (j.contains("seed")) s.seed = get<std::uint64_t>(j["seed"], "seed");
    if (j.contains("out_dir")) s.out_dir = get<std::string>(j["out_dir"], "out_dir");
    validate(s);
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("scenario file '" + path.string() + "': " + e.what());
    }
    return scenario_from_json(j);
}

json to_json(const Scenario& s) {
    json j;
    j["metrics"] = s.metrics;
    j["curve_metric"] = s.curve_metric;
    j["t_seeds"] = s.t_seeds;
    j["y_seeds"] = s.y_seeds;
    j["j_seeds"] = s.j_seeds;
    j["integrator"] = {{"tol", s.tol},
                       {"x_stop", s.x_stop},
                       {"s_min", s.s_min},
                       {"max_relative_spacing", s.max_relative_spacing}};
    j["margin"] = s.margin;
    j["boundary_tol"] = s.boundary_tol;
    json pairs = json::array();
    for (const auto& [a, b] : s.jmap_pairs) pairs.push_back({a, b});
    j["jmap"] = {{"pairs", pairs}, {"T_samples", s.T_samples}};
    j["oracle"] = {{"box", box_to(s.oracle.box)}, {"h", s.oracle.h}, {"samples", s.oracle.samples}};
    const auto& c = s.confmap;
    j["confmap"] = {{"cloud_box", box_to(c.cloud_box)},
                    {"cloud_points", c.cloud_points},
                    {"interface_xs", c.interface_xs},
                    {"interface_eps", c.interface_eps},
                    {"null_tol", c.null_tol},
                    {"x_curve_seeds", c.x_curve_seeds},
                    {"y_curve_seeds", c.y_curve_seeds},
                    {"angle", angle_name(c.angle)},
                    {"radius", radius_name(c.radius)}};
    j["seed"] = s.seed;
    j["out_dir"] = s.out_dir;
    return j;
}

void validate(const Scenario& s) {
    if (s.metrics.empty()) bad("metrics", "empty");
    for (const auto& m : s.metrics) check_metric(m, "metrics");
    check_metric(s.curve_metric, "curve_metric");

    if (s.t_seeds.empty()) bad("t_seeds", "empty seed list");
    check_finite(s.t_seeds, "t_seeds");
    if (std::set<double>(s.t_seeds.begin(), s.t_seeds.end()).size() != s.t_seeds.size())
        bad("t_seeds", "duplicate seed");
    check_finite(s.y_seeds, "y_seeds");
    for (const auto& [t, x] : s.j_seeds)
        if (!std::isfinite(t) || !std::isfinite(x) || !(x < 0.0))
            bad("j_seeds", "each seed is a finite (t, x) with x < 0");

    if (!(s.tol > 0.0) || !(s.tol <= 1e-2)) bad("integrator.tol", "must lie in (0, 1e-2]");
    if (!(s.x_stop < 0.0)) bad("integrator.x_stop", "must be < 0");
    if (!(s.s_min < -1.0)) bad("integrator.s_min", "must be < -1 (seeds sit at s = -1)");
    if (!(s.x_stop > -1.0)) bad("integrator.x_stop", "must be > -1 (seeds sit at s = -1)");
    if (!(s.max_relative_spacing > 0.0) || !(s.max_relative_spacing <= 0.5))
        bad("integrator.max_relative_spacing", "must lie in (0, 0.5]");
    if (!(s.margin >= 0.0) || !std::isfinite(s.margin)) bad("margin", "must be finite and >= 0");
    if (!(s.boundary_tol > 0.0) || !std::isfinite(s.boundary_tol))
        bad("boundary_tol", "must be finite and > 0");

    for (const auto& [a, b] : s.jmap_pairs) {
        check_metric(a, "jmap.pairs");
        check_metric(b, "jmap.pairs");
    }
    if (s.T_samples.empty()) bad("jmap.T_samples", "empty");
    check_finite(s.T_samples, "jmap.T_samples");
    if (!std::is_sorted(s.T_samples.begin(), s.T_samples.end()) ||
        std::adjacent_find(s.T_samples.begin(), s.T_samples.end()) != s.T_samples.end())
        bad("jmap.T_samples", "must be strictly increasing");

    check_box(s.oracle.box, "oracle.box");
    if (!(s.oracle.h > 0.0) || !std::isfinite(s.oracle.h)) bad("oracle.h", "must be > 0");
    const double cells = (s.oracle.box.t_max - s.oracle.box.t_min) / s.oracle.h *
                         (s.oracle.box.x_max - s.oracle.box.x_min) / s.oracle.h;
    if (cells > 3.2e4) bad("oracle.h", "lattice too fine for the box (closure is quadratic in nodes)");

    check_box(s.confmap.cloud_box, "confmap.cloud_box");
    check_finite(s.confmap.interface_xs, "confmap.interface_xs");
    for (double x : s.confmap.interface_xs)
        if (!(x < 0.0)) bad("confmap.interface_xs", "entries must be < 0");
    if (!(s.confmap.interface_eps > 0.0)) bad("confmap.interface_eps", "must be > 0");
    if (!(s.confmap.null_tol > 0.0)) bad("confmap.null_tol", "must be > 0");
    check_finite(s.confmap.x_curve_seeds, "confmap.x_curve_seeds");
    check_finite(s.confmap.y_curve_seeds, "confmap.y_curve_seeds");
    if (s.out_dir.empty()) bad("out_dir", "empty");
}

} // namespace cbound
