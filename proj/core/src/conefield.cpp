#include "cbound/conefield.hpp"

#include "cbound/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cbound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double exp_bump(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

} // namespace

Point::Point(double t, double x) : t_(t), x_(x) {
    if (!std::isfinite(t) || !std::isfinite(x))
        throw InvalidInput("Point: coordinates must be finite");
    if (!(x < 0.0))
        throw InvalidInput("Point: x must be < 0 (got " + std::to_string(x) + ")");
}

std::string_view to_string(Ternary v) {
    switch (v) {
    case Ternary::Inside: return "Inside";
    case Ternary::Boundary: return "Boundary";
    case Ternary::Outside: return "Outside";
    }
    return "?";
}

double smooth_step(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    const double a = exp_bump(s);
    const double b = exp_bump(1.0 - s);
    return a / (a + b);
}

BetaProfile::BetaProfile() : BetaProfile(0.25, 1.0, 0.5, 1.0, smooth_step) {}

BetaProfile::BetaProfile(double low, double high, double u_lo, double u_hi, Transition step)
    : low_(low), high_(high), u_lo_(u_lo), u_hi_(u_hi), step_(std::move(step)) {
    if (!(low > 0.0) || !(high >= low) || !(u_hi > u_lo) || !step_)
        throw InvalidInput("BetaProfile: need 0 < low <= high, u_lo < u_hi and a step function");
}

double BetaProfile::operator()(double u) const {
    // The outer branches return the constants themselves so that the constant
    // regions are bit-exact.
    if (u <= u_lo_) return low_;
    if (u >= u_hi_) return high_;
    return low_ + (high_ - low_) * step_((u - u_lo_) / (u_hi_ - u_lo_));
}

double beta_eval(const BetaProfile& profile, double u) {
    if (!std::isfinite(u)) throw InvalidInput("beta_eval: u must be finite");
    return profile(u);
}

ConeField::ConeField(MetricKind kind, BetaProfile profile)
    : kind_(kind), profile_(std::move(profile)) {}

ConeField ConeField::minkowski() { return {MetricKind::Minkowski, {}}; }
ConeField ConeField::narrow() { return {MetricKind::Narrow, {}}; }
ConeField ConeField::strain(BetaProfile profile) { return {MetricKind::Strain, std::move(profile)}; }

ConeField ConeField::from_id(std::string_view id) {
    if (id == "g_cc") return minkowski();
    if (id == "g_ca") return narrow();
    if (id == "g") return strain();
    throw InvalidInput("unknown metric id '" + std::string(id) + "' (expected g_cc, g or g_ca)");
}

std::string_view ConeField::id() const noexcept {
    switch (kind_) {
    case MetricKind::Minkowski: return "g_cc";
    case MetricKind::Narrow: return "g_ca";
    case MetricKind::Strain: return "g";
    }
    return "?";
}

double ConeField::beta_of_ratio(double u) const {
    switch (kind_) {
    case MetricKind::Minkowski: return 1.0;
    case MetricKind::Narrow: return 0.25;
    case MetricKind::Strain: return profile_(u);
    }
    return 1.0;
}

double ConeField::beta_at(const Point& p) const { return beta_of_ratio(p.t() / p.x()); }

std::optional<ConstantZone> ConeField::zone_of_ratio(double u) const {
    switch (kind_) {
    case MetricKind::Minkowski: return ConstantZone{1.0, -kInf, kInf};
    case MetricKind::Narrow: return ConstantZone{0.25, -kInf, kInf};
    case MetricKind::Strain:
        if (u <= profile_.u_lo()) return ConstantZone{profile_.low(), -kInf, profile_.u_lo()};
        if (u >= profile_.u_hi()) return ConstantZone{profile_.high(), profile_.u_hi(), kInf};
        return std::nullopt;
    }
    return std::nullopt;
}

double ConeField::min_slope() const {
    switch (kind_) {
    case MetricKind::Minkowski: return 1.0;
    case MetricKind::Narrow: return 0.5;
    case MetricKind::Strain: return std::sqrt(profile_.low());
    }
    return 1.0;
}

double ConeField::max_slope() const {
    switch (kind_) {
    case MetricKind::Minkowski: return 1.0;
    case MetricKind::Narrow: return 0.5;
    case MetricKind::Strain: return std::sqrt(profile_.high());
    }
    return 1.0;
}

double null_slope(const ConeField& metric, const Point& p) { return std::sqrt(metric.beta_at(p)); }

Ternary is_causal_vector(const ConeField& metric, const Point& p, double vt, double vx,
                         double margin) {
    if (vt == 0.0 && vx == 0.0) throw InvalidInput("is_causal_vector: zero vector");
    if (!std::isfinite(vt) || !std::isfinite(vx))
        throw InvalidInput("is_causal_vector: non-finite vector");
    if (vt <= 0.0) return Ternary::Outside;
    const double lhs = vt * vt;
    const double rhs = metric.beta_at(p) * vx * vx;
    if (lhs > rhs + margin) return Ternary::Inside;
    if (lhs < rhs - margin) return Ternary::Outside;
    return Ternary::Boundary;
}

std::string_view to_string(ConeRelation r) {
    switch (r) {
    case ConeRelation::Included: return "Included";
    case ConeRelation::ReverseIncluded: return "ReverseIncluded";
    case ConeRelation::Equal: return "Equal";
    case ConeRelation::Incomparable: return "Incomparable";
    }
    return "?";
}

ConeComparison cone_compare(const ConeField& m1, const ConeField& m2,
                            std::span<const Point> region, double margin) {
    if (region.empty()) throw InvalidInput("cone_compare: empty region");
    ConeComparison out{ConeRelation::Equal, {}, kInf, -kInf};
    out.margins.reserve(region.size());
    for (const auto& p : region) {
        const double d = m1.beta_at(p) - m2.beta_at(p);
        out.margins.push_back(d);
        out.min_margin = std::min(out.min_margin, d);
        out.max_margin = std::max(out.max_margin, d);
    }
    const bool all_equal = out.min_margin >= -margin && out.max_margin <= margin;
    const bool forward = out.min_margin >= -margin;
    const bool reverse = out.max_margin <= margin;
    if (all_equal) out.relation = ConeRelation::Equal;
    else if (forward) out.relation = ConeRelation::Included;
    else if (reverse) out.relation = ConeRelation::ReverseIncluded;
    else out.relation = ConeRelation::Incomparable;
    return out;
}

std::vector<Point> sample_grid(double t_lo, double t_hi, double x_lo, double x_hi, int n_t,
                               int n_x) {
    if (n_t < 1 || n_x < 1) throw InvalidInput("sample_grid: need at least one sample per axis");
    if (!(x_hi < 0.0) || x_lo > x_hi || t_lo > t_hi)
        throw InvalidInput("sample_grid: box must satisfy t_lo <= t_hi, x_lo <= x_hi < 0");
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(n_t) * static_cast<std::size_t>(n_x));
    auto lerp = [](double a, double b, int i, int n) {
        return n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    };
    for (int i = 0; i < n_t; ++i)
        for (int j = 0; j < n_x; ++j)
            out.emplace_back(lerp(t_lo, t_hi, i, n_t), lerp(x_lo, x_hi, j, n_x));
    return out;
}

} // namespace cbound
