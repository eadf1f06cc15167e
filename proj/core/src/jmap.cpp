#include "cbound/jmap.hpp"

#include "cbound/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace cbound {

namespace {

void require_nested(const ConeField& m1, const ConeField& m2) {
    static const auto region = sample_grid(-3.0, 3.0, -3.0, -0.05, 50, 50);
    const auto rel = cone_compare(m1, m2, region).relation;
    if (rel != ConeRelation::Included && rel != ConeRelation::Equal)
        throw ContractViolation("jhat: cones of " + std::string(m1.id()) + " are not inside those of " +
                                std::string(m2.id()));
}

} // namespace

Endpoint endpoint_of_past(const ConeField& metric, const PastSet& p) {
    if (p.is_whole()) return Endpoint::infinity();
    if (p.left_tail() == LeftTail::Rising) return Endpoint::infinity();
    const auto l = p.right_limit(metric);
    Endpoint e;
    e.kind = Endpoint::Kind::Attached;
    e.T = 0.5 * (l.lo + l.hi);
    e.uncertainty = 0.5 * (l.hi - l.lo);
    if (std::abs(e.T) <= e.uncertainty + 1e-12) e.T = 0.0;
    return e;
}

TIP jhat(const ConeField& m1, const ConeField& m2, const TIP& P, const Numerics& num,
         int ladder_points) {
    require_nested(m1, m2);
    if (P.metric_id != m1.id()) throw InvalidInput("jhat: TIP does not belong to the source metric");
    if (P.is_i_plus()) return i_plus(m2);
    if (!P.generator) throw InvalidInput("jhat: TIP carries no generator");
    const auto carrier_metric = ConeField::from_id(P.generator->metric_id());
    const auto ladder = ladder_on(carrier_metric, P.generator, num, ladder_points);
    TIP out;
    out.uid = new_tip_uid();
    out.metric_id = std::string(m2.id());
    out.past = past_of_curve(m2, ladder, num);
    out.generator = P.generator;
    out.endpoint = P.endpoint.attached() ? endpoint_of_past(m2, out.past) : Endpoint::infinity();
    out.label = P.endpoint.attached() ? TipLabel::TPoint : TipLabel::JplusMember;
    out.t_seed = out.past.defined_at(-1.0) ? out.past.boundary(-1.0) : 0.0;
    return out;
}

double jhat_law_cc(double T) { return T <= 0.0 ? T - 1.0 : T - 0.5; }

JhatProfile jhat_profile(const ConeField& m1, const ConeField& m2, const SourceFamily& source,
                         std::span<const double> samples, const BoundaryAtlas& target,
                         const Numerics& num, const ProfileOptions& opt) {
    if (!std::is_sorted(samples.begin(), samples.end()))
        throw InvalidInput("jhat_profile: samples must be ordered");
    require_nested(m1, m2);
    const auto grid = comparison_grid(num.window);
    auto image = [&](double x) { return jhat(m1, m2, source(x), num, opt.ladder_points); };

    JhatProfile prof;
    std::vector<TIP> images;
    std::set<std::size_t> hits;
    for (double x : samples) {
        images.push_back(image(x));
        double d = 0.0;
        const auto match = match_in_atlas(target, images.back().past, grid, opt.match_tol, &d);
        prof.rows.push_back({x, images.back().endpoint.T, match, d});
        if (match) hits.insert(*match);
        else prof.unmatched_sources.push_back(x);
    }

    // One-sided limits: the innermost offset flags a jump; the full sequence
    // is then checked for convergence to the matched member.
    std::set<std::size_t> limits;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double delta = 0.1;
        if (i > 0) delta = std::min(delta, samples[i] - samples[i - 1]);
        if (i + 1 < samples.size()) delta = std::min(delta, samples[i + 1] - samples[i]);
        if (!(delta > 0.0)) continue;
        const double inner = delta * std::pow(10.0, -opt.limit_terms);
        const auto left = image(samples[i] - inner);
        const auto right = image(samples[i] + inner);
        const double jump = boundary_distance(left.past, right.past, grid);
        if (jump <= opt.match_tol) continue;
        ContinuityBreak br{samples[i], std::nullopt, std::nullopt, jump};
        for (int side : {-1, +1}) {
            std::vector<TIP> seq;
            for (int n = 1; n < opt.limit_terms; ++n)
                seq.push_back(image(samples[i] + side * delta * std::pow(10.0, -n)));
            seq.push_back(side < 0 ? left : right);
            const auto m = match_in_atlas(target, seq.back().past, grid, opt.match_tol);
            if (!m) continue;
            const auto lim = chron_limit(seq, target.tips[*m], grid, opt.match_tol);
            if (lim.verdict != LimitVerdict::Converges) continue;
            (side < 0 ? br.left_limit : br.right_limit) = m;
            limits.insert(*m);
        }
        prof.continuity_breaks.push_back(br);
    }

    std::vector<bool> grouped(images.size(), false);
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (grouped[i]) continue;
        CollisionGroup g{{samples[i]}, images[i].endpoint.T, prof.rows[i].match};
        for (std::size_t j = i + 1; j < images.size(); ++j)
            if (!grouped[j] &&
                boundary_distance(images[i].past, images[j].past, grid) <= opt.collision_tol) {
                grouped[j] = true;
                g.sources.push_back(samples[j]);
            }
        if (g.sources.size() > 1) prof.non_injective_groups.push_back(std::move(g));
    }

    std::vector<std::size_t> members;
    for (const auto& [T, idx] : target.T_line) members.push_back(idx);
    for (const auto& g : target.strain_groups) members.insert(members.end(), g.members.begin(), g.members.end());
    for (auto idx : members) {
        if (hits.count(idx)) continue;
        if (limits.count(idx)) prof.limit_only_targets.push_back(idx);
        else prof.unreached_targets.push_back(idx);
    }
    return prof;
}

CompositionReport composition_check(const ConeField& m_cc, const ConeField& m,
                                    const ConeField& m_ca, std::span<const double> T_samples,
                                    const Numerics& num, double tol) {
    CompositionReport rep;
    if (m_ca.kind() == MetricKind::Strain)
        throw InvalidInput("composition_check: the last metric must have constant cones");
    const auto grid = comparison_grid(num.window);
    const double k = m_ca.min_slope();
    std::vector<TIP> sources;
    std::vector<TIP> images;
    for (double T : T_samples) {
        auto c = x_curve_ending_at(m_cc, T, num.window, num.integrator);
        if (!c) throw InvalidInput("composition_check: no generator ends at the sampled T");
        auto P = tip_from_curve(m_cc, std::make_shared<const NullCurve>(std::move(*c)), num);
        auto R = jhat(m, m_ca, jhat(m_cc, m, P, num), num);
        double dev = 0.0;
        for (double s : grid) dev = std::max(dev, std::abs(R.past.boundary(s) - (T + k * s)));
        rep.rows.push_back({T, R.endpoint.T, dev});
        if (std::abs(R.endpoint.T - T) > tol || dev > tol)
            rep.violations.push_back("T = " + std::to_string(T) + " is not mapped to itself");
        sources.push_back(std::move(P));
        images.push_back(std::move(R));
    }
    if (!T_samples.empty()) {
        const auto a1 = atlas_from_tips(m_cc, std::move(sources), {}, num);
        const auto a2 = atlas_from_tips(m_ca, std::move(images), {}, num);
        rep.iso = atlas_iso_check(a1, a2, [](double T) { return T; }, num, tol);
    }
    rep.pass = rep.violations.empty() && rep.iso.pass;
    return rep;
}

} // namespace cbound
