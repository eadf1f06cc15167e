#pragma once

// The maps P -> I_2^-(P) between future boundaries of metrics with nested cones.

#include "cbound/cboundary.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cbound {

/// I_2^-(P) as a TIP of m2, computed from a ladder on P's generator. Throws
/// ContractViolation unless the cones of m1 lie inside those of m2.
TIP jhat(const ConeField& m1, const ConeField& m2, const TIP& P, const Numerics& num = {},
         int ladder_points = 16);

/// Seed t of the strain-metric TIP that is the image of the Minkowski TIP ending at T.
double jhat_law_cc(double T);

/// Endpoint of a past set, read from the bracket on lim b at x = 0.
Endpoint endpoint_of_past(const ConeField& metric, const PastSet& p);

/// A one-parameter family of source TIPs (for example parametrized by endpoint).
using SourceFamily = std::function<TIP(double)>;

struct JhatRow {
    double source;
    double image_T;
    std::optional<std::size_t> match; ///< index into the target atlas
    double match_distance;
};

struct ContinuityBreak {
    double at;
    std::optional<std::size_t> left_limit;  ///< target atlas member
    std::optional<std::size_t> right_limit;
    double jump; ///< sup distance between the one-sided limits
};

struct CollisionGroup {
    std::vector<double> sources;
    double image_T;
    std::optional<std::size_t> match;
};

struct JhatProfile {
    std::vector<JhatRow> rows;
    std::vector<ContinuityBreak> continuity_breaks;
    std::vector<CollisionGroup> non_injective_groups;
    /// Target members neither hit by a sample nor attained as a one-sided limit.
    std::vector<std::size_t> unreached_targets;
    /// Target members attained only as one-sided limits.
    std::vector<std::size_t> limit_only_targets;
    std::vector<double> unmatched_sources;
};

struct ProfileOptions {
    double match_tol = 1e-4;     ///< boundary agreement for atlas matching and breaks
    double collision_tol = 1e-9; ///< images closer than this collide
    int limit_terms = 5;         ///< one-sided offsets delta * 10^-n, n = 1..limit_terms
    int ladder_points = 16;
};

JhatProfile jhat_profile(const ConeField& m1, const ConeField& m2, const SourceFamily& source,
                         std::span<const double> samples, const BoundaryAtlas& target,
                         const Numerics& num = {}, const ProfileOptions& opt = {});

struct CompositionRow {
    double T;
    double image_T;
    double max_deviation; ///< sup |b(s) - (T + s/2)| on the grid
};

struct CompositionReport {
    bool pass = true;
    std::vector<CompositionRow> rows;
    IsoReport iso;
    std::vector<std::string> violations;
};

/// j_ca o j_cc on the Minkowski TIPs ending at the sampled T.
CompositionReport composition_check(const ConeField& m_cc, const ConeField& m,
                                    const ConeField& m_ca, std::span<const double> T_samples,
                                    const Numerics& num = {}, double tol = 1e-4);

} // namespace cbound
