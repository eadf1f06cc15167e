#pragma once

// Piecewise map f from V to a region of the Minkowski plane, built from the
// right-moving null foliation: region B (above the wedge), A (the wedge
// between r = s and r = s/2) and C (below).

#include "cbound/chronology.hpp"

#include <cmath>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

namespace cbound {

enum class Region { A, B, C };

std::string_view to_string(Region r);

/// Angle a = pi/2 - arctan(1/2) fixing the corner (-a, a) of the target.
inline const double kCornerAngle = std::numbers::pi / 2.0 - std::atan(0.5);

/// How the wedge angle alpha in [0, a] is read off a wedge point.
enum class WedgeAngle {
    SeedAffine,   ///< alpha = a (-2 t - 1) with t = r(-1) of the null curve through p
    ArrivalSlope, ///< alpha from the limit slope m of that curve at the origin
};

/// How the wedge radius is read off the left-moving null curve sigma through p.
enum class WedgeRadius {
    Blended,  ///< |sigma meets r = s/2| blended toward |sigma meets r = s| as alpha -> a
    HalfLine, ///< |sigma meets r = s/2|
};

struct ConfmapOptions {
    WedgeAngle angle = WedgeAngle::SeedAffine;
    WedgeRadius radius = WedgeRadius::Blended;
};

struct MapParams {
    Region region;
    double alpha = 0.0; ///< A only
    double r = 0.0;     ///< Euclidean length
    double t_end = 0.0; ///< B and C: endpoint of the right-moving null curve through p
};

struct TargetPoint {
    double t;
    double x;
};

/// Boundaries belong to A: x <= t <= x/2.
Region region_of(const Point& p);

/// Angle of a limit slope m in [1/2, 1], rescaled onto [0, a].
double arrival_angle(double m);

MapParams params_of(const ConeField& metric, const Point& p, const Numerics& num = {},
                    const ConfmapOptions& opt = {});
/// Parameters computed with the formulas of a given region (for interface checks).
MapParams params_in_region(const ConeField& metric, const Point& p, Region region,
                           const Numerics& num = {}, const ConfmapOptions& opt = {});

TargetPoint map_from_params(const MapParams& mp);
TargetPoint map_f(const ConeField& metric, const Point& p, const Numerics& num = {},
                  const ConfmapOptions& opt = {});

/// V' = L^2 minus ({x >= a} union {t + x >= 0, 0 <= x <= a}).
bool in_target(const TargetPoint& q);

/// Primed region of an image by t - x: B' >= 0, A' in [-2a, 0], C' <= -2a.
bool in_primed(const TargetPoint& q, Region r, double tol = 1e-12);

struct SegmentStats {
    std::size_t segments = 0;
    double max_deviation = 0.0;  ///< raw | |dt/dx| - 1 |
    double mean_deviation = 0.0;
    double max_excess = 0.0;     ///< deviation beyond the segment's rounding resolution
};

struct NullcheckReport {
    Family family;
    SegmentStats asserted;      ///< right-moving segments inside B or inside C
    SegmentStats informational; ///< everything else
    std::size_t degenerate = 0; ///< image segments with zero x-extent
    bool pass = true;           ///< asserted.max_excess <= tol and no degenerate segment
};

/// Measures | |dt/dx| - 1 | of the image of each sample segment. A difference
/// quotient of coordinates of size M over an extent dx carries a rounding
/// error of order eps M / dx; the excess is the deviation beyond that bound.
NullcheckReport nullcheck_f(const ConeField& metric, const NullCurve& curve, double tol = 1e-9,
                            const Numerics& num = {}, const ConfmapOptions& opt = {});

struct InterfaceRow {
    double x;
    bool upper;         ///< true: r = s/2 (A against B); false: r = s (A against C)
    double formula_gap; ///< |f_A - f_B| or |f_A - f_C| at the interface point
    double one_sided_gap; ///< |f(p + eps) - f(p - eps)| across the interface
};

/// Continuity across both wedge edges at the given x values.
std::vector<InterfaceRow> interface_continuity(const ConeField& metric, std::span<const double> xs,
                                               double eps = 1e-9, const Numerics& num = {},
                                               const ConfmapOptions& opt = {});

} // namespace cbound
