#include "cbound/chronology.hpp"

#include "cbound/error.hpp"
#include "cbound/numfmt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace cbound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::shared_ptr<const NullCurve> branch(const ConeField& metric, Family family, const Point& p,
                                        double s_lo, double s_hi, const Numerics& num) {
    const Seed seed{p.x(), p.t()};
    return std::make_shared<const NullCurve>(
        integrate_null(metric, family, seed, IntegrationWindow{s_lo, s_hi}, num.integrator));
}

Limit curve_limit_at_zero(const ConeField& metric, const NullCurve& c) {
    if (const auto& tail = c.right_tail()) {
        const double v = tail->at(0.0);
        return {v, v};
    }
    const auto& last = c.samples().back();
    const double d = std::abs(last.s);
    if (c.family() == Family::X && wedge_trapped(metric, last.s, last.r)) return {0.0, 0.0};
    if (c.family() == Family::X)
        return {last.r + d * metric.min_slope(), last.r + d * metric.max_slope()};
    return {last.r - d * metric.max_slope(), last.r - d * metric.min_slope()};
}

} // namespace

PastSet::PastSet(PastKind kind, std::vector<BoundaryPiece> pieces)
    : kind_(kind), pieces_(std::move(pieces)) {
    if (kind_ != PastKind::Whole && pieces_.empty())
        throw InvalidInput("PastSet: a proper past set needs at least one boundary piece");
    for (const auto& pc : pieces_)
        if (!pc.curve || !(pc.lo <= pc.hi))
            throw InvalidInput("PastSet: malformed boundary piece");
}

PastSet PastSet::whole() { return PastSet(PastKind::Whole, {}); }

bool PastSet::defined_at(double s) const noexcept {
    if (is_whole()) return s < 0.0;
    return std::any_of(pieces_.begin(), pieces_.end(), [s](const BoundaryPiece& pc) {
        return s >= pc.lo && s <= pc.hi && pc.curve->covers(s);
    });
}

double PastSet::boundary(double s) const {
    if (!(s < 0.0)) throw DomainError("PastSet::boundary: s must be < 0");
    if (is_whole()) return kInf;
    double b = -kInf;
    bool any = false;
    for (const auto& pc : pieces_) {
        if (s < pc.lo || s > pc.hi || !pc.curve->covers(s)) continue;
        b = std::max(b, pc.curve->value(s));
        any = true;
    }
    if (!any) throw DomainError("PastSet::boundary: no boundary piece defined at s");
    return b;
}

Ternary PastSet::contains(const Point& p, double margin) const {
    if (is_whole()) return Ternary::Inside;
    const double d = boundary(p.x()) - p.t();
    if (d > margin) return Ternary::Inside;
    if (d < -margin) return Ternary::Outside;
    return Ternary::Boundary;
}

LeftTail PastSet::left_tail() const {
    if (is_whole()) return LeftTail::Rising;
    for (const auto& pc : pieces_)
        if (pc.lo == -kInf && pc.curve->family() == Family::Y) return LeftTail::Rising;
    return LeftTail::XBounded;
}

Limit PastSet::right_limit(const ConeField& metric) const {
    if (is_whole()) return {kInf, kInf};
    Limit out{-kInf, -kInf};
    bool any = false;
    for (const auto& pc : pieces_) {
        if (pc.hi != 0.0) continue;
        const auto l = curve_limit_at_zero(metric, *pc.curve);
        out.lo = std::max(out.lo, l.lo);
        out.hi = std::max(out.hi, l.hi);
        any = true;
    }
    if (!any) throw DomainError("PastSet::right_limit: no piece reaches x = 0");
    return out;
}

double PastSet::uncertainty(const Numerics& num) const {
    for (const auto& pc : pieces_)
        if (!pc.curve->analytic()) return num.integrated_margin();
    return 0.0;
}

PastSet past_of_point(const ConeField& metric, const Point& p, const Numerics& num) {
    const double xi = p.x();
    const double s_lo = std::min(num.window.s_min, 2.0 * xi);
    const double s_hi = std::max(num.window.x_stop, 0.5 * xi);
    std::vector<BoundaryPiece> pieces;
    pieces.push_back({branch(metric, Family::X, p, s_lo, xi, num), -kInf, xi});
    pieces.push_back({branch(metric, Family::Y, p, xi, s_hi, num), xi, 0.0});
    return PastSet(PastKind::PointPast, std::move(pieces));
}

double point_past_boundary(const ConeField& metric, const Point& q, double s,
                           const Numerics& num, bool* exact) {
    if (!(s < 0.0)) throw DomainError("point_past_boundary: s must be < 0");
    if (exact) *exact = true;
    if (s == q.x()) return q.t();
    const Family fam = s < q.x() ? Family::X : Family::Y;
    const IntegrationWindow w{std::min(s, q.x()), std::max(s, q.x())};
    const auto c = integrate_null(metric, fam, Seed{q.x(), q.t()}, w, num.integrator);
    if (exact) *exact = c.analytic();
    return c.value(s);
}

Ternary chron_rel(const ConeField& metric, const Point& p, const Point& q, const Numerics& num) {
    bool exact = true;
    const double b = point_past_boundary(metric, q, p.x(), num, &exact);
    const double margin = exact ? num.margin : std::max(num.margin, num.integrated_margin());
    const double d = b - p.t();
    if (d > margin) return Ternary::Inside;
    if (d < -margin) return Ternary::Outside;
    return Ternary::Boundary;
}

CausalCurve ladder_on(const ConeField& carrier_metric, std::shared_ptr<const NullCurve> curve,
                      const Numerics& num, int n_points) {
    if (!curve) throw InvalidInput("ladder_on: null curve");
    if (n_points < 2) throw InvalidInput("ladder_on: need at least two points");
    const double a = curve->left_tail() ? num.window.s_min
                                        : std::max(num.window.s_min, curve->s_front());
    const double b = curve->right_tail() ? num.window.x_stop
                                         : std::min(num.window.x_stop, curve->s_back());
    if (!(a < b)) throw InvalidInput("ladder_on: curve does not span the window");
    CausalCurve out;
    std::vector<double> ss;
    for (int k = 0; k < n_points; ++k) {
        const double f = static_cast<double>(k) / (n_points - 1);
        ss.push_back(k == n_points - 1 ? b : a * std::pow(b / a, f));
    }
    if (curve->family() == Family::Y) std::reverse(ss.begin(), ss.end());
    for (double s : ss) out.points.emplace_back(curve->value(s), s);
    if (curve->family() == Family::X) {
        const auto e = endpoint_of(carrier_metric, *curve, std::max(1e-4, std::abs(b)));
        if (e.attached()) out.endpoint_T = e.T;
    }
    out.carrier = std::move(curve);
    return out;
}

PastSet past_of_curve(const ConeField& metric, const CausalCurve& curve, const Numerics& num) {
    if (curve.points.empty()) throw InvalidInput("past_of_curve: empty curve");
    for (std::size_t k = 0; k + 1 < curve.points.size(); ++k)
        if (chron_rel(metric, curve.points[k], curve.points[k + 1], num) == Ternary::Outside)
            throw InvalidInput("past_of_curve: samples are not causally ordered");

    const bool reuse = curve.carrier && curve.carrier->family() == Family::X &&
                       curve.carrier->metric_id() == metric.id();
    std::vector<BoundaryPiece> pieces;
    if (reuse) {
        // The carrier is itself a null curve of this metric: it is the X branch
        // of every sample, and of the endpoint when there is one.
        const double hi = curve.endpoint_T ? 0.0 : curve.points.back().x();
        pieces.push_back({curve.carrier, -kInf, hi});
        const double s_hi = num.window.x_stop;
        for (const auto& p : curve.points)
            if (p.x() < s_hi)
                pieces.push_back({branch(metric, Family::Y, p, p.x(), s_hi, num), p.x(), 0.0});
    } else {
        for (const auto& p : curve.points) {
            auto pp = past_of_point(metric, p, num);
            pieces.insert(pieces.end(), pp.pieces().begin(), pp.pieces().end());
        }
    }
    if (curve.endpoint_T && !reuse) {
        if (auto x = x_curve_ending_at(metric, *curve.endpoint_T, num.window, num.integrator))
            pieces.push_back({std::make_shared<const NullCurve>(std::move(*x)), -kInf, 0.0});
    }
    return PastSet(PastKind::CurvePast, std::move(pieces));
}

LeqResult pastset_leq(const PastSet& p1, const PastSet& p2, std::span<const double> grid,
                      double margin) {
    if (grid.empty()) throw InvalidInput("pastset_leq: empty grid");
    if (p2.is_whole())
        return {Ternary::Inside, !p1.is_whole(), p1.is_whole() ? 0.0 : -kInf,
                p1.is_whole() ? 0.0 : kInf, std::nullopt};
    if (p1.is_whole()) return {Ternary::Outside, false, kInf, -kInf, grid.front()};
    LeqResult r{Ternary::Inside, false, -kInf, -kInf, std::nullopt};
    double arg = grid.front();
    for (double s : grid) {
        const double d = p1.boundary(s) - p2.boundary(s);
        if (d > r.max_excess) {
            r.max_excess = d;
            arg = s;
        }
        r.max_gap = std::max(r.max_gap, -d);
    }
    if (r.max_excess > margin) {
        r.relation = Ternary::Outside;
        r.witness_s = arg;
    }
    r.strict = r.relation == Ternary::Inside && r.max_gap > margin;
    return r;
}

std::vector<double> comparison_grid(const IntegrationWindow& w) {
    if (!(w.s_min < w.x_stop) || !(w.x_stop < 0.0))
        throw InvalidInput("comparison_grid: invalid window");
    std::vector<double> g;
    constexpr int kGeo = 241;
    for (int k = 0; k < kGeo; ++k) {
        const double f = static_cast<double>(k) / (kGeo - 1);
        g.push_back(k == kGeo - 1 ? w.x_stop : w.s_min * std::pow(w.x_stop / w.s_min, f));
    }
    for (int k = 0;; ++k) {
        const double s = w.s_min + 0.05 * k;
        if (s > -0.05 + 1e-12 || s > w.x_stop) break;
        g.push_back(s);
    }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-12; }),
            g.end());
    return g;
}

void write_pastset_csv(std::ostream& os, const PastSet& p, std::span<const double> grid) {
    os << "s,b\n";
    for (double s : grid) os << shortest(s) << ',' << shortest(p.boundary(s)) << '\n';
}

} // namespace cbound
