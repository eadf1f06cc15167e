#pragma once

// Half-plane V = R x (-inf, 0) with the three cone fields -dt^2 + beta dx^2
// and pointwise causal predicates.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cbound {

/// A point (t, x) of V. Construction rejects x >= 0 and non-finite values.
class Point {
public:
    Point(double t, double x);

    double t() const noexcept { return t_; }
    double x() const noexcept { return x_; }

    friend bool operator==(const Point&, const Point&) = default;

private:
    double t_;
    double x_;
};

enum class Ternary { Inside, Boundary, Outside };

std::string_view to_string(Ternary v);

/// Default absolute margin used by every three-valued decision.
inline constexpr double kDefaultMargin = 1e-9;

/// Smooth step on [0,1]: e(s)/(e(s)+e(1-s)) with e(s) = exp(-1/s), exactly
/// 0 for s <= 0 and exactly 1 for s >= 1.
double smooth_step(double s);

/// Transition profile beta(u): constant `low` for u <= u_lo, constant `high`
/// for u >= u_hi, and low + (high-low) * step((u-u_lo)/(u_hi-u_lo)) between.
class BetaProfile {
public:
    using Transition = std::function<double(double)>;

    /// The default profile: 1/4 -> 1 over [1/2, 1] with the exponential mollifier.
    BetaProfile();
    BetaProfile(double low, double high, double u_lo, double u_hi, Transition step);

    double operator()(double u) const;

    double low() const noexcept { return low_; }
    double high() const noexcept { return high_; }
    double u_lo() const noexcept { return u_lo_; }
    double u_hi() const noexcept { return u_hi_; }

private:
    double low_;
    double high_;
    double u_lo_;
    double u_hi_;
    Transition step_;
};

/// beta(u) with input validation; throws InvalidInput for non-finite u.
double beta_eval(const BetaProfile& profile, double u);

enum class MetricKind {
    Minkowski, ///< g_cc = -dt^2 + dx^2
    Narrow,    ///< g_ca = -dt^2 + dx^2 / 4
    Strain,    ///< g    = -dt^2 + beta(t/x) dx^2
};

/// A range of u = t/x on which beta is constant.
struct ConstantZone {
    double beta;
    double u_min;
    double u_max;
};

/// A metric of the family -dt^2 + beta dx^2 on V, identified by its beta.
class ConeField {
public:
    static ConeField minkowski();
    static ConeField narrow();
    static ConeField strain(BetaProfile profile = {});

    /// Parses "g_cc", "g" or "g_ca".
    static ConeField from_id(std::string_view id);

    MetricKind kind() const noexcept { return kind_; }
    std::string_view id() const noexcept;
    const BetaProfile& profile() const noexcept { return profile_; }

    double beta_at(const Point& p) const;
    /// beta as a function of u = t/x (constant metrics ignore u).
    double beta_of_ratio(double u) const;

    /// The constant zone containing u, if beta is locally constant there.
    std::optional<ConstantZone> zone_of_ratio(double u) const;

    /// Bounds on sqrt(beta) over all of V.
    double min_slope() const;
    double max_slope() const;

    bool same_as(const ConeField& other) const noexcept { return id() == other.id(); }

private:
    ConeField(MetricKind kind, BetaProfile profile);

    MetricKind kind_;
    BetaProfile profile_;
};

/// |dt/dx| along null directions at p, i.e. sqrt(beta(p)).
double null_slope(const ConeField& metric, const Point& p);

/// Future-directed causal test for a tangent vector v = (vt, vx) at p.
Ternary is_causal_vector(const ConeField& metric, const Point& p, double vt, double vx,
                         double margin = kDefaultMargin);

enum class ConeRelation { Included, ReverseIncluded, Equal, Incomparable };

std::string_view to_string(ConeRelation r);

struct ConeComparison {
    ConeRelation relation;
    /// beta_1(p) - beta_2(p) per sample; >= 0 means m1's cone is inside m2's.
    std::vector<double> margins;
    double min_margin;
    double max_margin;
};

/// Pointwise inclusion of future cones of m1 in those of m2 over a sample set.
ConeComparison cone_compare(const ConeField& m1, const ConeField& m2,
                            std::span<const Point> region, double margin = kDefaultMargin);

/// Regular n_t x n_x sample grid over [t_lo, t_hi] x [x_lo, x_hi] (x_hi < 0).
std::vector<Point> sample_grid(double t_lo, double t_hi, double x_lo, double x_hi,
                               int n_t, int n_x);

} // namespace cbound
