#include "cbound/export.hpp"

#include "cbound/error.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace cbound {

using nlohmann::json;

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

} // namespace

json to_json(const Endpoint& e) {
    json j;
    j["kind"] = e.attached() ? "attached" : "infinity";
    if (e.attached()) {
        j["T"] = e.T;
        j["uncertainty"] = e.uncertainty;
        j["slope_limit"] = e.slope_limit ? json(*e.slope_limit) : json(nullptr);
    }
    return j;
}

json to_json(const LeqResult& r) {
    return {{"relation", to_string(r.relation)},
            {"strict", r.strict},
            {"max_excess", finite_or_null(r.max_excess)},
            {"max_gap", finite_or_null(r.max_gap)},
            {"witness_s", r.witness_s ? json(*r.witness_s) : json(nullptr)}};
}

json to_json(const ExtChronResult& r) {
    json j{{"verdict", to_string(r.verdict)},
           {"certificate", to_string(r.certificate)},
           {"detail", r.detail}};
    j["witness"] = r.witness ? json::array({r.witness->t(), r.witness->x()}) : json(nullptr);
    j["s_violation"] = r.s_violation ? json(*r.s_violation) : json(nullptr);
    return j;
}

json to_json(const IsoReport& r) {
    return {{"pass", r.pass},
            {"endpoints_checked", r.endpoints_checked},
            {"pairs_checked", r.pairs_checked},
            {"violations", r.violations}};
}

json tip_json(const TIP& tip, std::span<const double> grid) {
    json j{{"label", to_string(tip.label)}, {"endpoint", to_json(tip.endpoint)}};
    if (tip.is_i_plus()) {
        j["boundary"] = nullptr;
        return j;
    }
    j["t_seed"] = tip.t_seed;
    if (tip.generator) {
        j["family"] = to_string(tip.generator->family());
        j["seed"] = {{"s", tip.generator->seed().s}, {"r", tip.generator->seed().r}};
        j["analytic"] = tip.generator->analytic();
    }
    json b = json::array();
    for (double s : grid)
        b.push_back(tip.past.defined_at(s) ? finite_or_null(tip.past.boundary(s)) : json(nullptr));
    j["boundary"] = std::move(b);
    return j;
}

json atlas_json(const BoundaryAtlas& atlas, std::span<const double> grid) {
    json j;
    j["metric"] = atlas.metric_id;
    j["grid"] = std::vector<double>(grid.begin(), grid.end());
    json tips = json::array();
    for (const auto& t : atlas.tips) tips.push_back(tip_json(t, grid));
    j["tips"] = std::move(tips);
    json line = json::array();
    for (const auto& [T, i] : atlas.T_line) line.push_back({{"T", T}, {"tip", i}});
    j["T_line"] = std::move(line);
    json strains = json::array();
    for (const auto& g : atlas.strain_groups)
        strains.push_back({{"endpoint", g.endpoint}, {"members", g.members}, {"size", g.members.size()}});
    j["strain_groups"] = std::move(strains);
    j["jplus"] = atlas.jplus;
    j["endpoint_count"] = atlas.endpoint_count();
    return j;
}

json relation_json(const BoundaryAtlas& atlas, const RelationMatrix& m) {
    json j;
    j["metric"] = atlas.metric_id;
    j["order"] = m.order;
    json rows = json::array();
    for (const auto& row : m.cls) {
        json r = json::array();
        for (auto c : row) r.push_back(to_string(c));
        rows.push_back(std::move(r));
    }
    j["classes"] = std::move(rows);
    return j;
}

void write_relation_csv(std::ostream& os, const BoundaryAtlas& atlas, const RelationMatrix& m) {
    os << "row,col,row_label,col_label,class\n";
    for (std::size_t a = 0; a < m.order.size(); ++a)
        for (std::size_t b = 0; b < m.order.size(); ++b)
            os << m.order[a] << ',' << m.order[b] << ','
               << to_string(atlas.tips[m.order[a]].label) << ','
               << to_string(atlas.tips[m.order[b]].label) << ',' << to_string(m.cls[a][b]) << '\n';
}

std::string scenario_comment(const json& scenario) { return "# scenario " + scenario.dump() + "\n"; }

void write_file(const std::filesystem::path& path, const std::string& body) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << body;
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

void write_json(const std::filesystem::path& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

void write_csv(const std::filesystem::path& path, const json& scenario,
               const std::function<void(std::ostream&)>& body) {
    std::ostringstream os;
    os << scenario_comment(scenario);
    body(os);
    write_file(path, os.str());
}

} // namespace cbound
