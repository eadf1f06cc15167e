#pragma once

// Null characteristics of -dt^2 + beta dx^2: the right-moving family X
// (dr/ds = +sqrt(beta(r/s))) and the left-moving family Y (dr/ds = -sqrt(beta)).
// Curves are stored as graphs r(s) over s < 0.

#include "cbound/conefield.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cbound {

enum class Family { X, Y };

std::string_view to_string(Family f);

struct Seed {
    double s;
    double r;
};

struct CurveSample {
    double s;
    double r;
    double slope; ///< dr/ds at the sample
};

/// Straight continuation r(s) = intercept + slope * s, anchored at s = 0 so
/// that evaluation near the boundary does not cancel.
struct LineTail {
    double intercept;
    double slope;

    double at(double s) const noexcept { return intercept + slope * s; }
};

/// Integration window [s_min, x_stop]; no evaluation ever happens at x = 0.
struct IntegrationWindow {
    double s_min = -10.0;
    double x_stop = -1e-6;
};

struct IntegratorOptions {
    double tol = 1e-10;                 ///< local error bound per step, in r
    double max_relative_spacing = 0.01; ///< sample spacing <= this * |s|
    bool analytic_tails = true;         ///< switch to exact lines in constant-beta zones
};

/// A sampled monotone solution of the characteristic ODE.
class NullCurve {
public:
    NullCurve(Family family, Seed seed, std::vector<CurveSample> samples,
              std::optional<LineTail> left_tail, std::optional<LineTail> right_tail,
              std::string metric_id, double min_slope, double max_slope);

    Family family() const noexcept { return family_; }
    Seed seed() const noexcept { return seed_; }
    std::span<const CurveSample> samples() const noexcept { return samples_; }
    const std::optional<LineTail>& left_tail() const noexcept { return left_; }
    const std::optional<LineTail>& right_tail() const noexcept { return right_; }
    const std::string& metric_id() const noexcept { return metric_id_; }

    double s_front() const noexcept { return samples_.front().s; }
    double s_back() const noexcept { return samples_.back().s; }

    /// True if value(s) is defined (inside the samples or covered by a tail).
    bool covers(double s) const noexcept;

    /// r(s); monotone cubic Hermite between samples, exact lines on tails.
    double value(double s) const;

    /// True when the whole curve is a single certified line.
    bool analytic() const noexcept;

private:
    Family family_;
    Seed seed_;
    std::vector<CurveSample> samples_;
    std::optional<LineTail> left_;
    std::optional<LineTail> right_;
    std::string metric_id_;
    double slope_lo_;
    double slope_hi_;
};

/// Integrates the family through `seed` over [window.s_min, window.x_stop].
/// Throws InvalidInput for a window outside V or a seed outside the window,
/// IntegrationError on step-size underflow.
NullCurve integrate_null(const ConeField& metric, Family family, Seed seed,
                         const IntegrationWindow& window, const IntegratorOptions& options = {});

/// curve.value(s); throws DomainError outside the curve's domain.
double curve_value(const NullCurve& curve, double s);

struct Endpoint {
    enum class Kind { Attached, Infinity };

    Kind kind = Kind::Infinity;
    double T = 0.0;                   ///< limit of r(s) as s -> 0-
    std::optional<double> slope_limit; ///< lim r(s)/s, present iff T == 0
    double uncertainty = 0.0;         ///< half-width bracket on T

    static Endpoint infinity() { return {}; }
    bool attached() const noexcept { return kind == Kind::Attached; }
};

/// Future endpoint of a curve. X curves end on x = 0; Y curves escape to
/// infinity. `max_gap` bounds |s_back| when no exact tail is available.
Endpoint endpoint_of(const ConeField& metric, const NullCurve& curve, double max_gap = 1e-4);

/// True when (s, r) lies between two exact null lines r = k s of the metric;
/// such a right-moving curve ends exactly at (0, 0).
bool wedge_trapped(const ConeField& metric, double s, double r);

/// Closed-form endpoint T_end(t) of the X curve through (t, -1).
double endpoint_law(const ConeField& metric, double t);

/// The X curve whose endpoint is (T, 0), when it is unique and an exact line
/// (every T for constant metrics; T != 0 for the strain metric).
std::optional<NullCurve> x_curve_ending_at(const ConeField& metric, double T,
                                           const IntegrationWindow& window,
                                           const IntegratorOptions& options = {});

/// CSV with header `s,r`, one row per sample, shortest round-trip decimals.
void write_curve_csv(std::ostream& os, const NullCurve& curve);

} // namespace cbound
