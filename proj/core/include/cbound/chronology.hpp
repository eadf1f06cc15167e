#pragma once

// Past sets as strict hypographs {(t, s) : t < b(s)} of 1-Lipschitz boundary
// functions, and the point-level chronological relation.

#include "cbound/conefield.hpp"
#include "cbound/nullflow.hpp"

#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace cbound {

/// Numerical policy shared by every set-level operation.
struct Numerics {
    IntegrationWindow window;
    IntegratorOptions integrator;
    double margin = kDefaultMargin; ///< margin for exact (analytic) comparisons

    /// Margin attached to integrated boundary segments.
    double integrated_margin() const noexcept { return 10.0 * integrator.tol; }
};

/// One null curve contributing to a boundary function on [lo, hi].
struct BoundaryPiece {
    std::shared_ptr<const NullCurve> curve;
    double lo; ///< may be -inf
    double hi; ///< may be 0 (meaning up to the boundary x = 0)
};

enum class PastKind { PointPast, CurvePast, HalfPlane, Whole };

/// Behaviour of b(s) as s -> -inf.
enum class LeftTail {
    Rising,   ///< b -> +inf (a left-moving null curve bounds the set)
    XBounded, ///< b is a right-moving null curve for large -s
};

/// Bracket on lim b(s) as s -> 0-.
struct Limit {
    double lo;
    double hi;
};

/// b(s) = max of the pieces covering s. The Whole kind is all of V.
class PastSet {
public:
    PastSet(PastKind kind, std::vector<BoundaryPiece> pieces);

    static PastSet whole();

    PastKind kind() const noexcept { return kind_; }
    bool is_whole() const noexcept { return kind_ == PastKind::Whole; }
    std::span<const BoundaryPiece> pieces() const noexcept { return pieces_; }

    /// True if some piece is defined at s.
    bool defined_at(double s) const noexcept;
    /// b(s); +inf for Whole. Throws DomainError where no piece is defined.
    double boundary(double s) const;
    /// Strict membership with a margin band reported as Boundary.
    Ternary contains(const Point& p, double margin = kDefaultMargin) const;

    LeftTail left_tail() const;
    Limit right_limit(const ConeField& metric) const;

    /// 0 when every piece is an exact line, else the integrated margin.
    double uncertainty(const Numerics& num) const;

private:
    PastKind kind_;
    std::vector<BoundaryPiece> pieces_;
};

/// I^-(p): the right-moving null curve through p for s <= x_p and the
/// left-moving one for s >= x_p.
PastSet past_of_point(const ConeField& metric, const Point& p, const Numerics& num = {});

/// b_q(s) for the past of q, integrating only the branch that reaches s.
/// `exact` (if given) reports whether the branch is a certified line.
double point_past_boundary(const ConeField& metric, const Point& q, double s,
                           const Numerics& num = {}, bool* exact = nullptr);

/// Hypograph test t_p < b_q(x_p), integrating only the branch that reaches x_p.
Ternary chron_rel(const ConeField& metric, const Point& p, const Point& q,
                  const Numerics& num = {});

/// A future-directed causal curve given by ordered samples.
struct CausalCurve {
    std::vector<Point> points;
    std::optional<double> endpoint_T; ///< future endpoint (T, 0) on the boundary
    /// Optional exact curve the points lie on, with the metric it is null for.
    std::shared_ptr<const NullCurve> carrier;
};

/// Samples a null curve on a ladder geometrically refined toward x_stop.
CausalCurve ladder_on(const ConeField& carrier_metric, std::shared_ptr<const NullCurve> curve,
                      const Numerics& num = {}, int n_points = 16);

/// I^-[gamma] as the max of the point pasts of the samples, plus the past of the
/// endpoint (T, 0) when a unique null curve ends there. Throws InvalidInput
/// when consecutive samples are not causally ordered.
PastSet past_of_curve(const ConeField& metric, const CausalCurve& curve, const Numerics& num = {});

struct LeqResult {
    Ternary relation;   ///< Inside: P1 within P2 up to margin; Outside otherwise
    bool strict;        ///< some s with b1 < b2 - margin
    double max_excess;  ///< max of b1 - b2 over the grid
    double max_gap;     ///< max of b2 - b1 over the grid
    std::optional<double> witness_s; ///< s attaining max_excess when Outside
};

LeqResult pastset_leq(const PastSet& p1, const PastSet& p2, std::span<const double> grid,
                      double margin = kDefaultMargin);

/// Shared comparison grid: geometric from s_min to x_stop plus a uniform
/// 0.05 lattice on [s_min, -0.05]; sorted and deduplicated.
std::vector<double> comparison_grid(const IntegrationWindow& window);

/// CSV `s,b` of the boundary function on a grid.
void write_pastset_csv(std::ostream& os, const PastSet& p, std::span<const double> grid);

} // namespace cbound
