#include "cbound/nullflow.hpp"

#include "cbound/error.hpp"
#include "cbound/numfmt.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace cbound {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr double kSlopeSlack = 1e-12;
constexpr double kMinStep = 1e-14;

using Stepper = odeint::runge_kutta_dopri5<double, double, double, double,
                                           odeint::vector_space_algebra>;

double family_sign(Family f) { return f == Family::X ? 1.0 : -1.0; }

// Autonomous flow of u = r/s in tau = -ln(-s).
struct RatioFlow {
    const ConeField* metric;
    double sign;

    void operator()(const double& u, double& du, double /*tau*/) const {
        du = u - sign * std::sqrt(metric->beta_of_ratio(u));
    }
};

struct March {
    std::vector<CurveSample> samples; // excludes the starting point, ordered by travel
    std::optional<LineTail> tail;
};

// The line through (s, r) with the zone slope stays in the zone for every s'
// between s and the far end (0 for dir > 0, -inf for dir < 0). On such a line
// u(s') = slope + c/s' is monotone, so checking both ends is exact.
std::optional<LineTail> certify_line(const ConeField& metric, Family family, double s, double r,
                                     int dir) {
    const double u = r / s;
    const auto zone = metric.zone_of_ratio(u);
    if (!zone) return std::nullopt;
    const double slope = family_sign(family) * std::sqrt(zone->beta);
    const double c = r - slope * s;
    double u_far = slope;
    if (dir > 0 && c != 0.0)
        u_far = c > 0.0 ? -std::numeric_limits<double>::infinity()
                        : std::numeric_limits<double>::infinity();
    const double lo = std::min(u, u_far);
    const double hi = std::max(u, u_far);
    if (lo < zone->u_min || hi > zone->u_max) return std::nullopt;
    return LineTail{c, slope};
}

void fill_line(const LineTail& line, double s0, double s_end, int dir, double dtau,
               std::vector<CurveSample>& out) {
    const double factor = dir > 0 ? std::exp(-dtau) : std::exp(dtau);
    double s = s0;
    while (true) {
        s *= factor;
        if ((dir > 0 && s >= s_end) || (dir < 0 && s <= s_end)) {
            if (s0 != s_end) out.push_back({s_end, line.at(s_end), line.slope});
            return;
        }
        out.push_back({s, line.at(s), line.slope});
    }
}

March march(const ConeField& metric, Family family, double s0, double r0, double s_end, int dir,
            const IntegratorOptions& opt, double tol_u) {
    March out;
    const double dtau_max = std::log1p(opt.max_relative_spacing);
    if (opt.analytic_tails) {
        if (auto line = certify_line(metric, family, s0, r0, dir)) {
            fill_line(*line, s0, s_end, dir, dtau_max, out.samples);
            out.tail = line;
            return out;
        }
    }
    if (s0 == s_end) return out;

    const double sign = family_sign(family);
    RatioFlow flow{&metric, sign};
    auto stepper = odeint::make_controlled(tol_u, 0.0, Stepper{});
    const double tau_end = -std::log(-s_end);
    double tau = -std::log(-s0);
    double u = r0 / s0;
    double dt = dir * std::min(dtau_max, 1e-3);

    while (dir * (tau_end - tau) > 0.0) {
        bool last = false;
        if (std::abs(dt) > dtau_max) dt = dir * dtau_max;
        if (dir * (tau + dt - tau_end) >= 0.0) {
            dt = tau_end - tau;
            last = true;
        }
        const auto res = stepper.try_step(flow, u, tau, dt);
        if (res == odeint::fail) {
            if (std::abs(dt) < kMinStep)
                throw IntegrationError("integrate_null: step size underflow", -std::exp(-tau),
                                       u * -std::exp(-tau));
            continue;
        }
        const double s = last ? s_end : -std::exp(-tau);
        if (last) tau = tau_end;
        const double r = u * s;
        out.samples.push_back({s, r, sign * std::sqrt(metric.beta_of_ratio(u))});
        if (last) break;
        if (opt.analytic_tails) {
            if (auto line = certify_line(metric, family, s, r, dir)) {
                fill_line(*line, s, s_end, dir, dtau_max, out.samples);
                out.tail = line;
                return out;
            }
        }
    }
    return out;
}

double hermite(const CurveSample& a, const CurveSample& b, double s, double lo, double hi) {
    const double h = b.s - a.s;
    const double th = (s - a.s) / h;
    const double m = (b.r - a.r) / h;
    const double d0 = a.slope;
    const double d1 = b.slope;
    // p'(th) = d0 + B th + A th^2 in units of dr/ds
    const double A = 3.0 * d0 + 3.0 * d1 - 6.0 * m;
    const double B = 6.0 * m - 4.0 * d0 - 2.0 * d1;
    bool ok = d0 >= lo - kSlopeSlack && d0 <= hi + kSlopeSlack && d1 >= lo - kSlopeSlack &&
              d1 <= hi + kSlopeSlack;
    if (ok && A != 0.0) {
        const double ts = -B / (2.0 * A);
        if (ts > 0.0 && ts < 1.0) {
            const double ext = d0 + B * ts + A * ts * ts;
            ok = ext >= lo - kSlopeSlack && ext <= hi + kSlopeSlack;
        }
    }
    if (!ok) return a.r + m * (s - a.s);
    const double t2 = th * th;
    const double t3 = t2 * th;
    return (2 * t3 - 3 * t2 + 1) * a.r + (t3 - 2 * t2 + th) * h * d0 + (-2 * t3 + 3 * t2) * b.r +
           (t3 - t2) * h * d1;
}

} // namespace

std::string_view to_string(Family f) { return f == Family::X ? "X" : "Y"; }

NullCurve::NullCurve(Family family, Seed seed, std::vector<CurveSample> samples,
                     std::optional<LineTail> left_tail, std::optional<LineTail> right_tail,
                     std::string metric_id, double min_slope, double max_slope)
    : family_(family), seed_(seed), samples_(std::move(samples)), left_(left_tail),
      right_(right_tail), metric_id_(std::move(metric_id)) {
    if (samples_.empty()) throw InvalidInput("NullCurve: no samples");
    if (family == Family::X) {
        slope_lo_ = min_slope;
        slope_hi_ = max_slope;
    } else {
        slope_lo_ = -max_slope;
        slope_hi_ = -min_slope;
    }
}

bool NullCurve::covers(double s) const noexcept {
    if (!(s < 0.0)) return false;
    if (s < s_front()) return left_.has_value();
    if (s > s_back()) return right_.has_value();
    return true;
}

double NullCurve::value(double s) const {
    if (!covers(s)) throw DomainError("NullCurve: s outside the curve's domain");
    if (s < s_front()) return left_->at(s);
    if (s > s_back()) return right_->at(s);
    auto it = std::lower_bound(samples_.begin(), samples_.end(), s,
                               [](const CurveSample& c, double v) { return c.s < v; });
    if (it->s == s) return it->r;
    const auto& b = *it;
    const auto& a = *(it - 1);
    return hermite(a, b, s, slope_lo_, slope_hi_);
}

bool NullCurve::analytic() const noexcept {
    return left_ && right_ && left_->slope == right_->slope &&
           left_->intercept == right_->intercept;
}

NullCurve integrate_null(const ConeField& metric, Family family, Seed seed,
                         const IntegrationWindow& window, const IntegratorOptions& options) {
    if (!(window.x_stop < 0.0) || !(window.s_min < window.x_stop) || !std::isfinite(window.s_min))
        throw InvalidInput("integrate_null: window must satisfy s_min < x_stop < 0");
    if (!(seed.s >= window.s_min && seed.s <= window.x_stop) || !std::isfinite(seed.r))
        throw InvalidInput("integrate_null: seed outside the window");
    if (!(options.tol > 0.0) || !(options.max_relative_spacing > 0.0))
        throw InvalidInput("integrate_null: tol and spacing must be positive");

    const double tol_u = options.tol / std::max(1.0, std::abs(window.s_min));
    auto left = march(metric, family, seed.s, seed.r, window.s_min, -1, options, tol_u);
    auto right = march(metric, family, seed.s, seed.r, window.x_stop, +1, options, tol_u);

    const double sign = family_sign(family);
    std::vector<CurveSample> samples;
    samples.reserve(left.samples.size() + right.samples.size() + 1);
    samples.insert(samples.end(), left.samples.rbegin(), left.samples.rend());
    samples.push_back({seed.s, seed.r, sign * std::sqrt(metric.beta_of_ratio(seed.r / seed.s))});
    samples.insert(samples.end(), right.samples.begin(), right.samples.end());
    return NullCurve(family, seed, std::move(samples), left.tail, right.tail,
                     std::string(metric.id()), metric.min_slope(), metric.max_slope());
}

double curve_value(const NullCurve& curve, double s) { return curve.value(s); }

Endpoint endpoint_of(const ConeField& metric, const NullCurve& curve, double max_gap) {
    if (curve.family() == Family::Y) return Endpoint::infinity();
    Endpoint e;
    e.kind = Endpoint::Kind::Attached;
    if (const auto& tail = curve.right_tail()) {
        e.T = tail->at(0.0);
        if (std::abs(e.T) <= kSlopeSlack) {
            e.T = 0.0;
            e.slope_limit = tail->slope;
        }
        return e;
    }
    const auto samples = curve.samples();
    const auto& last = samples.back();
    if (std::abs(last.s) > max_gap)
        throw InvalidInput("endpoint_of: curve stops too far from x = 0");
    const double lo = last.r + std::abs(last.s) * metric.min_slope();
    const double hi = last.r + std::abs(last.s) * metric.max_slope();
    if (lo <= 0.0 && hi >= 0.0) {
        e.T = 0.0;
        e.uncertainty = wedge_trapped(metric, last.s, last.r) ? 0.0 : std::abs(last.s);
        // least-squares line through (s, r/s) over the last decade, value at s = 0
        double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto it = samples.rbegin(); it != samples.rend() && it->s >= 10.0 * last.s; ++it) {
            const double y = it->r / it->s;
            n += 1;
            sx += it->s;
            sy += y;
            sxx += it->s * it->s;
            sxy += it->s * y;
        }
        const double den = n * sxx - sx * sx;
        double m = last.r / last.s;
        if (n >= 2 && den > 0.0) m = (sy * sxx - sx * sxy) / den;
        e.slope_limit = std::clamp(m, metric.min_slope(), metric.max_slope());
        return e;
    }
    e.T = 0.5 * (lo + hi);
    e.uncertainty = 0.5 * (hi - lo);
    return e;
}

bool wedge_trapped(const ConeField& metric, double s, double r) {
    if (metric.kind() != MetricKind::Strain || !(s < 0.0)) return false;
    const auto& p = metric.profile();
    // r = u_lo s and r = u_hi s are solutions only when the slopes match the zones.
    if (std::sqrt(p.low()) != p.u_lo() || std::sqrt(p.high()) != p.u_hi()) return false;
    const double u = r / s;
    return u >= p.u_lo() && u <= p.u_hi();
}

double endpoint_law(const ConeField& metric, double t) {
    if (!std::isfinite(t)) throw InvalidInput("endpoint_law: t must be finite");
    if (metric.kind() != MetricKind::Strain) return t + metric.max_slope();
    const auto& p = metric.profile();
    const double lo = std::sqrt(p.low());
    const double hi = std::sqrt(p.high());
    if (lo != p.u_lo() || hi != p.u_hi())
        throw InvalidInput("endpoint_law: closed form needs sqrt(low) = u_lo and sqrt(high) = u_hi");
    // The lines r = s*hi and r = s*lo are solutions; seeds between them are trapped.
    if (t <= -hi) return t + hi;
    if (t >= -lo) return t + lo;
    return 0.0;
}

std::optional<NullCurve> x_curve_ending_at(const ConeField& metric, double T,
                                           const IntegrationWindow& window,
                                           const IntegratorOptions& options) {
    if (!std::isfinite(T)) throw InvalidInput("x_curve_ending_at: T must be finite");
    constexpr double kBig = 1e300;
    std::optional<ConstantZone> zone;
    if (T > 0.0) zone = metric.zone_of_ratio(-kBig);
    else if (T < 0.0) zone = metric.zone_of_ratio(kBig);
    else if (metric.kind() != MetricKind::Strain) zone = metric.zone_of_ratio(0.0);
    if (!zone) return std::nullopt;
    // u(s) = slope + T/s sweeps from slope to +-inf; both ends must lie in the zone.
    const double slope = std::sqrt(zone->beta);
    if (slope < zone->u_min || slope > zone->u_max) return std::nullopt;
    IntegratorOptions opt = options;
    opt.analytic_tails = true;
    const Seed seed{window.x_stop, T + slope * window.x_stop};
    auto curve = integrate_null(metric, Family::X, seed, window, opt);
    if (!curve.left_tail() || !curve.right_tail()) return std::nullopt;
    return curve;
}

void write_curve_csv(std::ostream& os, const NullCurve& curve) {
    os << "s,r\n";
    for (const auto& c : curve.samples()) os << shortest(c.s) << ',' << shortest(c.r) << '\n';
}

} // namespace cbound
