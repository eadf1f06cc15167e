#include "cbound/cboundary.hpp"

#include "cbound/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace cbound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sup_distance(const PastSet& a, const PastSet& b, std::span<const double> grid) {
    if (a.is_whole() || b.is_whole()) return a.is_whole() == b.is_whole() ? 0.0 : kInf;
    double d = 0.0;
    for (double s : grid) d = std::max(d, std::abs(a.boundary(s) - b.boundary(s)));
    return d;
}

double endpoint_tolerance(const Endpoint& e, const Numerics& num) {
    return std::max(std::abs(num.window.x_stop), e.uncertainty) + 1e-12;
}

PairClass flip(PairClass c) {
    if (c == PairClass::TimelikeForward) return PairClass::TimelikeBackward;
    if (c == PairClass::TimelikeBackward) return PairClass::TimelikeForward;
    return c;
}

// Groups T-type TIPs by endpoint, orders strains by inclusion and appends the
// null-infinity TIPs. Duplicates (boundaries within the matching tolerance) are dropped.
BoundaryAtlas assemble(const ConeField& metric, std::vector<TIP> t_tips, std::vector<TIP> j_tips,
                       const Numerics& num) {
    const auto grid = comparison_grid(num.window);
    const double same_tol = std::max(num.margin, num.integrated_margin());
    BoundaryAtlas atlas;
    atlas.metric_id = std::string(metric.id());
    atlas.i_plus = i_plus(metric);

    auto add_unique = [&](TIP&& tip) -> std::optional<std::size_t> {
        for (const auto& other : atlas.tips)
            if (other.generator->family() == tip.generator->family() &&
                sup_distance(other.past, tip.past, grid) <= same_tol)
                return std::nullopt;
        atlas.tips.push_back(std::move(tip));
        return atlas.tips.size() - 1;
    };

    std::vector<std::size_t> attached;
    for (auto& tip : t_tips) {
        if (!tip.endpoint.attached())
            throw InvalidInput("build_atlas: timelike-line seed without an endpoint on x = 0");
        if (auto idx = add_unique(std::move(tip))) attached.push_back(*idx);
    }
    std::stable_sort(attached.begin(), attached.end(), [&](std::size_t a, std::size_t b) {
        return atlas.tips[a].endpoint.T < atlas.tips[b].endpoint.T;
    });

    for (std::size_t i = 0; i < attached.size();) {
        const auto& head = atlas.tips[attached[i]].endpoint;
        std::size_t j = i + 1;
        while (j < attached.size() &&
               std::abs(atlas.tips[attached[j]].endpoint.T - head.T) <=
                   endpoint_tolerance(head, num) +
                       endpoint_tolerance(atlas.tips[attached[j]].endpoint, num))
            ++j;
        if (j - i == 1) {
            atlas.tips[attached[i]].label = TipLabel::TPoint;
            atlas.T_line.emplace_back(head.T, attached[i]);
        } else {
            StrainGroup g;
            g.members.assign(attached.begin() + static_cast<std::ptrdiff_t>(i),
                             attached.begin() + static_cast<std::ptrdiff_t>(j));
            // Curves ending at one point do not cross, so the order at s = -1 is the inclusion order.
            std::sort(g.members.begin(), g.members.end(), [&](std::size_t a, std::size_t b) {
                return atlas.tips[a].past.boundary(-1.0) < atlas.tips[b].past.boundary(-1.0);
            });
            double sum = 0.0;
            for (auto m : g.members) {
                atlas.tips[m].label = TipLabel::StrainMember;
                sum += atlas.tips[m].endpoint.T;
            }
            g.endpoint = sum / static_cast<double>(g.members.size());
            if (std::abs(g.endpoint) < 1e-12) g.endpoint = 0.0;
            atlas.strain_groups.push_back(std::move(g));
        }
        i = j;
    }
    for (auto& tip : j_tips)
        if (auto idx = add_unique(std::move(tip))) atlas.jplus.push_back(*idx);
    std::sort(atlas.jplus.begin(), atlas.jplus.end(), [&](std::size_t a, std::size_t b) {
        return atlas.tips[a].past.boundary(-1.0) < atlas.tips[b].past.boundary(-1.0);
    });
    return atlas;
}

struct EndpointEntry {
    double T;
    std::vector<std::size_t> members;
};

std::vector<EndpointEntry> endpoint_entries(const BoundaryAtlas& a) {
    std::vector<EndpointEntry> out;
    for (const auto& [T, idx] : a.T_line) out.push_back({T, {idx}});
    for (const auto& g : a.strain_groups) out.push_back({g.endpoint, g.members});
    std::sort(out.begin(), out.end(),
              [](const EndpointEntry& x, const EndpointEntry& y) { return x.T < y.T; });
    return out;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

} // namespace

std::uint64_t new_tip_uid() {
    static std::atomic<std::uint64_t> counter{1};
    return counter++;
}

std::string_view to_string(TipLabel l) {
    switch (l) {
    case TipLabel::TPoint: return "T_point";
    case TipLabel::StrainMember: return "Strain_member";
    case TipLabel::JplusMember: return "Jplus_member";
    case TipLabel::IPlus: return "i_plus";
    }
    return "?";
}

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::True: return "True";
    case Verdict::False: return "False";
    case Verdict::Indeterminate: return "Indeterminate";
    }
    return "?";
}

std::string_view to_string(Certificate c) {
    switch (c) {
    case Certificate::Witness: return "witness";
    case Certificate::NotSubset: return "not_subset";
    case Certificate::UnboundedPast: return "unbounded_past";
    case Certificate::EndpointTail: return "endpoint_tail";
    case Certificate::NoWitness: return "no_witness";
    case Certificate::ByDefinition: return "by_definition";
    }
    return "?";
}

std::string_view to_string(PairClass c) {
    switch (c) {
    case PairClass::TimelikeForward: return "TimelikeForward";
    case PairClass::TimelikeBackward: return "TimelikeBackward";
    case PairClass::Horismos: return "Horismos";
    case PairClass::Unrelated: return "Unrelated";
    case PairClass::Equal: return "Equal";
    case PairClass::Indeterminate: return "Indeterminate";
    }
    return "?";
}

std::string_view to_string(LimitVerdict v) {
    switch (v) {
    case LimitVerdict::Converges: return "Converges";
    case LimitVerdict::Diverges: return "Diverges";
    case LimitVerdict::Indeterminate: return "Indeterminate";
    }
    return "?";
}

TIP tip_from_curve(const ConeField& metric, std::shared_ptr<const NullCurve> curve,
                   const Numerics& num) {
    if (!curve) throw InvalidInput("tip_from_curve: null curve");
    if (curve->metric_id() != metric.id())
        throw InvalidInput("tip_from_curve: curve belongs to another metric");
    TIP tip;
    tip.uid = new_tip_uid();
    tip.metric_id = std::string(metric.id());
    tip.past = PastSet(PastKind::CurvePast, {BoundaryPiece{curve, -kInf, 0.0}});
    tip.endpoint = endpoint_of(metric, *curve, std::max(1e-4, std::abs(num.window.x_stop)));
    tip.label = curve->family() == Family::X ? TipLabel::TPoint : TipLabel::JplusMember;
    tip.t_seed = curve->covers(-1.0) ? curve->value(-1.0) : curve->seed().r;
    tip.generator = std::move(curve);
    return tip;
}

TIP tip_generate(const ConeField& metric, double t_seed, const Numerics& num) {
    if (!std::isfinite(t_seed)) throw InvalidInput("tip_generate: t_seed must be finite");
    auto c = std::make_shared<const NullCurve>(
        integrate_null(metric, Family::X, Seed{-1.0, t_seed}, num.window, num.integrator));
    return tip_from_curve(metric, std::move(c), num);
}

TIP tip_generate_J(const ConeField& metric, const Point& seed, const Numerics& num) {
    const IntegrationWindow w{std::min(num.window.s_min, 2.0 * seed.x()),
                              std::max(num.window.x_stop, 0.5 * seed.x())};
    auto c = std::make_shared<const NullCurve>(
        integrate_null(metric, Family::Y, Seed{seed.x(), seed.t()}, w, num.integrator));
    return tip_from_curve(metric, std::move(c), num);
}

TIP i_plus(const ConeField& metric) {
    TIP tip;
    tip.uid = new_tip_uid();
    tip.metric_id = std::string(metric.id());
    tip.past = PastSet::whole();
    tip.label = TipLabel::IPlus;
    return tip;
}

RelationEngine::RelationEngine(ConeField metric, Numerics num, WitnessSearch search)
    : metric_(std::move(metric)), num_(num), search_(std::move(search)),
      grid_(comparison_grid(num.window)) {}

double RelationEngine::margin(const PastSet& a, const PastSet& b) const {
    return std::max(num_.margin, a.uncertainty(num_) + b.uncertainty(num_));
}

LeqResult RelationEngine::leq(const TIP& a, const TIP& b) const {
    return pastset_leq(a.past, b.past, grid_, margin(a.past, b.past));
}

const std::vector<RelationEngine::Candidate>& RelationEngine::candidates(const TIP& p2) {
    auto it = cache_.find(p2.uid);
    if (it != cache_.end()) return it->second;
    std::vector<Candidate> out;
    double xi = search_.xi_start;
    for (int k = 0; k < search_.xi_count; ++k, xi *= search_.xi_ratio) {
        if (xi > num_.window.x_stop || xi < num_.window.s_min || !p2.past.defined_at(xi)) continue;
        const double b = p2.past.boundary(xi);
        for (double delta : search_.offsets) {
            Point p(b - delta, xi);
            out.push_back({p, past_of_point(metric_, p, num_)});
        }
    }
    return cache_.emplace(p2.uid, std::move(out)).first->second;
}

bool RelationEngine::verify_witness(const TIP& p1, const Candidate& c) const {
    const double m = margin(p1.past, c.past);
    // Left of the grid both boundaries are right-moving null curves, which do
    // not cross, so strict separation at the first grid point persists.
    for (double s : grid_) {
        if (!c.past.defined_at(s)) return false;
        if (p1.past.boundary(s) > c.past.boundary(s) - m) return false;
    }
    // Right of the grid b1 increases and the witness boundary decreases.
    const auto l1 = p1.past.right_limit(metric_);
    const auto lw = c.past.right_limit(metric_);
    return l1.hi <= lw.lo - m;
}

ExtChronResult RelationEngine::ext_chron(const TIP& p1, const TIP& p2) {
    if (p1.metric_id != metric_.id() || p2.metric_id != metric_.id())
        throw InvalidInput("ext_chron: TIPs belong to different metrics");
    ExtChronResult r;
    if (p2.is_i_plus()) {
        // i+ closes the timelike line; the null-infinity line reaches it horismotically.
        r.certificate = Certificate::ByDefinition;
        r.verdict = (!p1.is_i_plus() && p1.endpoint.attached()) ? Verdict::True : Verdict::False;
        r.detail = "relation with i+ fixed by definition";
        return r;
    }
    if (p1.is_i_plus()) {
        r.verdict = Verdict::False;
        r.certificate = Certificate::ByDefinition;
        r.detail = "V is not contained in a proper past set";
        return r;
    }
    if (p1.past.left_tail() == LeftTail::Rising) {
        r.verdict = Verdict::False;
        r.certificate = Certificate::UnboundedPast;
        r.detail = "b1 -> +inf as s -> -inf while every point past has b -> -inf";
        return r;
    }
    const auto l = leq(p1, p2);
    if (l.relation != Ternary::Inside) {
        r.verdict = Verdict::False;
        r.certificate = Certificate::NotSubset;
        r.s_violation = l.witness_s;
        r.detail = "b1 - b2 = " + fmt(l.max_excess) + " at s = " + fmt(*l.witness_s);
        return r;
    }
    const double m = margin(p1.past, p2.past);
    {
        // Every p' in P2 has a left-moving past branch ending at or below lim b2:
        // below t' < lim b2 for a right-moving generator, and by non-crossing
        // for a left-moving one.
        const auto l1 = p1.past.right_limit(metric_);
        const auto l2 = p2.past.right_limit(metric_);
        if (l1.lo >= l2.hi - m) {
            r.verdict = Verdict::False;
            r.certificate = Certificate::EndpointTail;
            r.detail = "lim b1 = " + fmt(l1.lo) + " >= lim b2 = " + fmt(l2.hi);
            return r;
        }
    }
    for (const auto& c : candidates(p2)) {
        if (verify_witness(p1, c)) {
            r.verdict = Verdict::True;
            r.certificate = Certificate::Witness;
            r.witness = c.p;
            return r;
        }
    }
    r.verdict = Verdict::Indeterminate;
    r.certificate = Certificate::NoWitness;
    r.detail = "no candidate verified";
    return r;
}

PairClass RelationEngine::classify(const TIP& p1, const TIP& p2) {
    if (p1.is_i_plus() || p2.is_i_plus()) {
        if (p1.is_i_plus() && p2.is_i_plus()) return PairClass::Equal;
        const TIP& other = p1.is_i_plus() ? p2 : p1;
        const PairClass c =
            other.endpoint.attached() ? PairClass::TimelikeForward : PairClass::Horismos;
        return p1.is_i_plus() ? flip(c) : c;
    }
    const auto l12 = leq(p1, p2);
    const auto l21 = leq(p2, p1);
    if (l12.relation == Ternary::Inside && l21.relation == Ternary::Inside) return PairClass::Equal;
    const auto e12 = ext_chron(p1, p2);
    if (e12.verdict == Verdict::True) return PairClass::TimelikeForward;
    const auto e21 = ext_chron(p2, p1);
    if (e21.verdict == Verdict::True) return PairClass::TimelikeBackward;
    if (e12.verdict == Verdict::Indeterminate || e21.verdict == Verdict::Indeterminate)
        return PairClass::Indeterminate;
    if (l12.relation == Ternary::Inside || l21.relation == Ternary::Inside)
        return PairClass::Horismos;
    return PairClass::Unrelated;
}

ExtChronResult ext_chron(const ConeField& metric, const TIP& p1, const TIP& p2,
                         const Numerics& num, const WitnessSearch& search) {
    RelationEngine e(metric, num, search);
    return e.ext_chron(p1, p2);
}

PairClass classify_pair(const ConeField& metric, const TIP& p1, const TIP& p2,
                        const Numerics& num) {
    RelationEngine e(metric, num);
    return e.classify(p1, p2);
}

BoundaryAtlas build_atlas(const ConeField& metric, std::span<const double> t_seeds,
                          std::span<const Point> j_seeds, const Numerics& num) {
    if (t_seeds.empty()) throw InvalidInput("build_atlas: empty seed grid");
    std::vector<TIP> t_tips;
    for (double t : t_seeds) t_tips.push_back(tip_generate(metric, t, num));
    std::vector<TIP> j_tips;
    for (const auto& p : j_seeds) j_tips.push_back(tip_generate_J(metric, p, num));
    return assemble(metric, std::move(t_tips), std::move(j_tips), num);
}

BoundaryAtlas endpoint_atlas(const ConeField& metric, std::span<const double> endpoints,
                             std::span<const double> extra_t_seeds,
                             std::span<const Point> j_seeds, const Numerics& num) {
    if (endpoints.empty() && extra_t_seeds.empty())
        throw InvalidInput("endpoint_atlas: nothing to generate");
    std::vector<TIP> t_tips;
    for (double T : endpoints) {
        auto c = x_curve_ending_at(metric, T, num.window, num.integrator);
        if (!c)
            throw InvalidInput("endpoint_atlas: no unique null generator ends at T = " + fmt(T));
        t_tips.push_back(tip_from_curve(metric, std::make_shared<const NullCurve>(std::move(*c)), num));
    }
    for (double t : extra_t_seeds) t_tips.push_back(tip_generate(metric, t, num));
    std::vector<TIP> j_tips;
    for (const auto& p : j_seeds) j_tips.push_back(tip_generate_J(metric, p, num));
    return assemble(metric, std::move(t_tips), std::move(j_tips), num);
}

BoundaryAtlas atlas_from_tips(const ConeField& metric, std::vector<TIP> t_tips,
                              std::vector<TIP> j_tips, const Numerics& num) {
    for (const auto& t : t_tips)
        if (t.metric_id != metric.id()) throw InvalidInput("atlas_from_tips: metric mismatch");
    return assemble(metric, std::move(t_tips), std::move(j_tips), num);
}

double boundary_distance(const PastSet& a, const PastSet& b, std::span<const double> grid) {
    return sup_distance(a, b, grid);
}

std::optional<std::size_t> match_in_atlas(const BoundaryAtlas& atlas, const PastSet& p,
                                          std::span<const double> grid, double tol,
                                          double* distance) {
    std::optional<std::size_t> best;
    double best_d = kInf;
    auto consider = [&](std::size_t idx) {
        const double d = sup_distance(atlas.tips[idx].past, p, grid);
        if (d < best_d) {
            best_d = d;
            best = idx;
        }
    };
    for (const auto& [T, idx] : atlas.T_line) consider(idx);
    for (const auto& g : atlas.strain_groups)
        for (auto m : g.members) consider(m);
    if (distance) *distance = best_d;
    if (best_d > tol) return std::nullopt;
    return best;
}

RelationMatrix relation_matrix(RelationEngine& engine, const BoundaryAtlas& atlas) {
    RelationMatrix m;
    for (const auto& e : endpoint_entries(atlas))
        m.order.insert(m.order.end(), e.members.begin(), e.members.end());
    m.order.insert(m.order.end(), atlas.jplus.begin(), atlas.jplus.end());
    const std::size_t n = m.order.size();
    m.cls.assign(n, std::vector<PairClass>(n, PairClass::Equal));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto c = engine.classify(atlas.tips[m.order[i]], atlas.tips[m.order[j]]);
            m.cls[i][j] = c;
            m.cls[j][i] = flip(c);
        }
    return m;
}

LimitResult chron_limit(std::span<const TIP> sequence, const TIP& candidate,
                        std::span<const double> grid, double tol) {
    LimitResult r{LimitVerdict::Indeterminate, {}};
    if (sequence.empty() || grid.empty()) return r;
    for (const auto& tip : sequence) {
        if (tip.metric_id != candidate.metric_id)
            throw InvalidInput("chron_limit: TIPs belong to different metrics");
        r.distances.push_back(sup_distance(tip.past, candidate.past, grid));
    }
    const auto& d = r.distances;
    const std::size_t half = d.size() / 2;
    bool tail_nonincreasing = true;
    for (std::size_t k = half; k + 1 < d.size(); ++k)
        if (d[k + 1] > d[k] + 1e-12) tail_nonincreasing = false;
    if (tail_nonincreasing && d.back() <= tol) r.verdict = LimitVerdict::Converges;
    else if (d.back() > tol && d.back() > d.front()) r.verdict = LimitVerdict::Diverges;
    return r;
}

BoundaryAtlas quotient_strain(const BoundaryAtlas& atlas) {
    std::vector<bool> keep(atlas.tips.size(), true);
    std::vector<std::pair<double, std::size_t>> reps;
    for (const auto& g : atlas.strain_groups) {
        for (std::size_t k = 0; k + 1 < g.members.size(); ++k) keep[g.members[k]] = false;
        reps.emplace_back(g.endpoint, g.members.back());
    }
    std::vector<std::size_t> remap(atlas.tips.size(), 0);
    BoundaryAtlas out;
    out.metric_id = atlas.metric_id;
    out.i_plus = atlas.i_plus;
    for (std::size_t i = 0; i < atlas.tips.size(); ++i) {
        if (!keep[i]) continue;
        remap[i] = out.tips.size();
        out.tips.push_back(atlas.tips[i]);
    }
    for (const auto& [T, idx] : atlas.T_line) out.T_line.emplace_back(T, remap[idx]);
    for (const auto& [T, idx] : reps) {
        out.tips[remap[idx]].label = TipLabel::TPoint;
        out.T_line.emplace_back(T, remap[idx]);
    }
    std::sort(out.T_line.begin(), out.T_line.end());
    for (auto j : atlas.jplus) out.jplus.push_back(remap[j]);
    return out;
}

IsoReport atlas_iso_check(const BoundaryAtlas& a1, const BoundaryAtlas& a2,
                          const EndpointPairing& pairing, const Numerics& num,
                          double endpoint_tol) {
    IsoReport rep;
    const auto e1 = endpoint_entries(a1);
    const auto e2 = endpoint_entries(a2);
    std::vector<std::optional<std::size_t>> image(e1.size());
    std::vector<bool> hit(e2.size(), false);
    for (std::size_t i = 0; i < e1.size(); ++i) {
        ++rep.endpoints_checked;
        const double target = pairing(e1[i].T);
        for (std::size_t j = 0; j < e2.size(); ++j)
            if (std::abs(e2[j].T - target) <= endpoint_tol) {
                image[i] = j;
                break;
            }
        if (!image[i]) {
            rep.violations.push_back("endpoint " + fmt(e1[i].T) + " has no image");
            continue;
        }
        if (hit[*image[i]])
            rep.violations.push_back("endpoint " + fmt(e2[*image[i]].T) + " hit twice");
        hit[*image[i]] = true;
        if (e1[i].members.size() != e2[*image[i]].members.size())
            rep.violations.push_back("endpoint " + fmt(e1[i].T) + " carries " +
                                     std::to_string(e1[i].members.size()) + " TIPs, image carries " +
                                     std::to_string(e2[*image[i]].members.size()));
    }
    for (std::size_t j = 0; j < e2.size(); ++j)
        if (!hit[j]) rep.violations.push_back("endpoint " + fmt(e2[j].T) + " not reached");
    for (std::size_t i = 0; i + 1 < e1.size(); ++i)
        if (image[i] && image[i + 1] && *image[i] >= *image[i + 1])
            rep.violations.push_back("pairing reverses order at endpoint " + fmt(e1[i].T));

    // Pair classes on TIPs matched member-by-member at equal-cardinality endpoints.
    std::vector<std::pair<std::size_t, std::size_t>> matched;
    for (std::size_t i = 0; i < e1.size(); ++i) {
        if (!image[i] || e1[i].members.size() != e2[*image[i]].members.size()) continue;
        for (std::size_t k = 0; k < e1[i].members.size(); ++k)
            matched.emplace_back(e1[i].members[k], e2[*image[i]].members[k]);
    }
    RelationEngine eng1(ConeField::from_id(a1.metric_id), num);
    RelationEngine eng2(ConeField::from_id(a2.metric_id), num);
    for (std::size_t x = 0; x < matched.size(); ++x)
        for (std::size_t y = x + 1; y < matched.size(); ++y) {
            ++rep.pairs_checked;
            const auto c1 = eng1.classify(a1.tips[matched[x].first], a1.tips[matched[y].first]);
            const auto c2 = eng2.classify(a2.tips[matched[x].second], a2.tips[matched[y].second]);
            if (c1 != c2)
                rep.violations.push_back(
                    "class mismatch between endpoints " + fmt(a1.tips[matched[x].first].endpoint.T) +
                    " and " + fmt(a1.tips[matched[y].first].endpoint.T) + ": " +
                    std::string(to_string(c1)) + " vs " + std::string(to_string(c2)));
        }
    rep.pass = rep.violations.empty();
    return rep;
}

} // namespace cbound
