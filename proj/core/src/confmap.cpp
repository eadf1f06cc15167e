#include "cbound/confmap.hpp"

#include "cbound/error.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace cbound {

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kHalfSqrt5 = std::sqrt(5.0) / 2.0;

// r(-1) of the right-moving null curve through p.
double seed_through(const ConeField& metric, const Point& p, const Numerics& num) {
    if (p.x() == -1.0) return p.t();
    const IntegrationWindow w{std::min(p.x(), -1.0), std::max(p.x(), -1.0)};
    return integrate_null(metric, Family::X, Seed{p.x(), p.t()}, w, num.integrator).value(-1.0);
}

double endpoint_through(const ConeField& metric, const Point& p, const Numerics& num,
                        std::optional<double>* slope = nullptr) {
    const IntegrationWindow w{std::min(num.window.s_min, 2.0 * p.x()),
                              std::max(num.window.x_stop, 0.5 * p.x())};
    const auto c = integrate_null(metric, Family::X, Seed{p.x(), p.t()}, w, num.integrator);
    const auto e = endpoint_of(metric, c, std::max(1e-4, std::abs(w.x_stop)));
    if (slope) *slope = e.slope_limit;
    return e.T;
}

// Root of h on [a, b] given h(a), h(b) of opposite signs (or zero at an end).
template <class F>
double crossing(F h, double a, double b) {
    const double ha = h(a);
    const double hb = h(b);
    if (ha == 0.0) return a;
    if (hb == 0.0) return b;
    if ((ha > 0.0) == (hb > 0.0))
        throw DomainError("params_of: left-moving curve does not cross the wedge edge");
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(
        h, a, b, ha, hb, boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (r.first + r.second);
}

MapParams wedge_params(const ConeField& metric, const Point& p, const Numerics& num,
                       const ConfmapOptions& opt) {
    MapParams mp{Region::A};
    if (opt.angle == WedgeAngle::SeedAffine) {
        mp.alpha = kCornerAngle * (-2.0 * seed_through(metric, p, num) - 1.0);
    } else {
        std::optional<double> m;
        endpoint_through(metric, p, num, &m);
        mp.alpha = arrival_angle(m.value_or(0.5));
    }
    mp.alpha = std::clamp(mp.alpha, 0.0, kCornerAngle);

    const double x = p.x();
    const IntegrationWindow w{2.0 * x, 0.5 * x};
    const auto sigma = integrate_null(metric, Family::Y, Seed{x, p.t()}, w, num.integrator);
    const double s1 = crossing([&](double s) { return sigma.value(s) - 0.5 * s; }, 2.0 * x, x);
    const double r_half = std::abs(s1) * kHalfSqrt5;
    if (opt.radius == WedgeRadius::HalfLine) {
        mp.r = r_half;
        return mp;
    }
    const double s2 = crossing([&](double s) { return sigma.value(s) - s; }, x, 0.5 * x);
    const double wgt = mp.alpha / kCornerAngle;
    mp.r = (1.0 - wgt) * r_half + wgt * kSqrt2 * std::abs(s2);
    return mp;
}

void accumulate(SegmentStats& st, double dev, double resolution) {
    st.mean_deviation = (st.mean_deviation * static_cast<double>(st.segments) + dev) /
                        static_cast<double>(st.segments + 1);
    ++st.segments;
    st.max_deviation = std::max(st.max_deviation, dev);
    st.max_excess = std::max(st.max_excess, dev - resolution);
}

constexpr double kRoundingFactor = 64.0 * std::numeric_limits<double>::epsilon();

double dist(const TargetPoint& a, const TargetPoint& b) { return std::hypot(a.t - b.t, a.x - b.x); }

} // namespace

std::string_view to_string(Region r) {
    switch (r) {
    case Region::A: return "A";
    case Region::B: return "B";
    case Region::C: return "C";
    }
    return "?";
}

Region region_of(const Point& p) {
    if (p.t() > 0.5 * p.x()) return Region::B;
    if (p.t() < p.x()) return Region::C;
    return Region::A;
}

double arrival_angle(double m) {
    if (!(m >= 0.5 && m <= 1.0)) throw InvalidInput("arrival_angle: m must lie in [1/2, 1]");
    const double at2 = std::atan(2.0);
    return kCornerAngle * (at2 - std::atan(1.0 / m)) / (at2 - std::numbers::pi / 4.0);
}

MapParams params_in_region(const ConeField& metric, const Point& p, Region region,
                           const Numerics& num, const ConfmapOptions& opt) {
    if (region == Region::A) return wedge_params(metric, p, num, opt);
    MapParams mp{region};
    mp.t_end = endpoint_through(metric, p, num);
    mp.r = std::hypot(mp.t_end - p.t(), p.x());
    return mp;
}

MapParams params_of(const ConeField& metric, const Point& p, const Numerics& num,
                    const ConfmapOptions& opt) {
    return params_in_region(metric, p, region_of(p), num, opt);
}

TargetPoint map_from_params(const MapParams& mp) {
    const double d = mp.r / kSqrt2;
    switch (mp.region) {
    case Region::B: return {mp.t_end - d, -d};
    case Region::A: return {-mp.alpha - d, mp.alpha - d};
    case Region::C: return {mp.t_end - kCornerAngle - d, kCornerAngle - d};
    }
    return {0.0, 0.0};
}

TargetPoint map_f(const ConeField& metric, const Point& p, const Numerics& num,
                  const ConfmapOptions& opt) {
    return map_from_params(params_of(metric, p, num, opt));
}

bool in_target(const TargetPoint& q) {
    if (q.x >= kCornerAngle) return false;
    if (q.t + q.x >= 0.0 && q.x >= 0.0 && q.x <= kCornerAngle) return false;
    return true;
}

bool in_primed(const TargetPoint& q, Region r, double tol) {
    const double d = q.t - q.x;
    switch (r) {
    case Region::B: return d >= -tol;
    case Region::A: return d <= tol && d >= -2.0 * kCornerAngle - tol;
    case Region::C: return d <= -2.0 * kCornerAngle + tol;
    }
    return false;
}

NullcheckReport nullcheck_f(const ConeField& metric, const NullCurve& curve, double tol,
                            const Numerics& num, const ConfmapOptions& opt) {
    NullcheckReport rep{curve.family(), {}, {}, 0, true};
    const auto samples = curve.samples();
    std::vector<TargetPoint> img;
    std::vector<Region> reg;
    img.reserve(samples.size());
    for (const auto& c : samples) {
        const Point p(c.r, c.s);
        reg.push_back(region_of(p));
        img.push_back(map_f(metric, p, num, opt));
    }
    for (std::size_t k = 0; k + 1 < img.size(); ++k) {
        const double dx = img[k + 1].x - img[k].x;
        const double dt = img[k + 1].t - img[k].t;
        if (dx == 0.0) {
            ++rep.degenerate;
            continue;
        }
        const double dev = std::abs(std::abs(dt / dx) - 1.0);
        const double mag = std::max({1.0, std::abs(img[k].t), std::abs(img[k].x),
                                     std::abs(img[k + 1].t), std::abs(img[k + 1].x)});
        const double resolution = kRoundingFactor * mag / std::abs(dx);
        const bool asserted = curve.family() == Family::X && reg[k] == reg[k + 1] &&
                              reg[k] != Region::A;
        accumulate(asserted ? rep.asserted : rep.informational, dev, resolution);
    }
    rep.pass = rep.asserted.max_excess <= tol && rep.degenerate == 0;
    return rep;
}

std::vector<InterfaceRow> interface_continuity(const ConeField& metric, std::span<const double> xs,
                                               double eps, const Numerics& num,
                                               const ConfmapOptions& opt) {
    std::vector<InterfaceRow> rows;
    for (double x : xs) {
        for (bool upper : {true, false}) {
            const double t = upper ? 0.5 * x : x;
            const Region other = upper ? Region::B : Region::C;
            const Point p(t, x);
            InterfaceRow row{x, upper, 0.0, 0.0};
            row.formula_gap =
                dist(map_from_params(params_in_region(metric, p, Region::A, num, opt)),
                     map_from_params(params_in_region(metric, p, other, num, opt)));
            const double into_a = upper ? -eps : eps;
            row.one_sided_gap = dist(map_f(metric, Point(t + into_a, x), num, opt),
                                     map_f(metric, Point(t - into_a, x), num, opt));
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace cbound
