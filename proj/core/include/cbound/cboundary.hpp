#pragma once

// Terminal past sets, their binary relations (inclusion, extended chronology,
// horismos), boundary atlases and the strain quotient.

#include "cbound/chronology.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cbound {

enum class TipLabel { TPoint, StrainMember, JplusMember, IPlus };

std::string_view to_string(TipLabel l);

struct TIP {
    std::uint64_t uid = 0;
    std::string metric_id;
    PastSet past = PastSet::whole();
    std::shared_ptr<const NullCurve> generator; ///< null for i+
    Endpoint endpoint;
    TipLabel label = TipLabel::TPoint;
    double t_seed = 0.0; ///< generator value at s = -1

    bool is_i_plus() const noexcept { return label == TipLabel::IPlus; }
};

/// Process-wide unique identifier for a newly built TIP.
std::uint64_t new_tip_uid();

/// TIP of the right-moving null curve with r(-1) = t_seed.
TIP tip_generate(const ConeField& metric, double t_seed, const Numerics& num = {});
/// TIP of the left-moving null curve through seed.
TIP tip_generate_J(const ConeField& metric, const Point& seed, const Numerics& num = {});
/// TIP of an arbitrary null curve of the metric.
TIP tip_from_curve(const ConeField& metric, std::shared_ptr<const NullCurve> curve,
                   const Numerics& num = {});
/// The TIP equal to all of V.
TIP i_plus(const ConeField& metric);

enum class Verdict { True, False, Indeterminate };

std::string_view to_string(Verdict v);

enum class Certificate {
    Witness,       ///< True: a verified p' in P2 with P1 inside I^-(p')
    NotSubset,     ///< P1 is not contained in P2
    UnboundedPast, ///< b1 -> +inf as s -> -inf; no point past contains P1
    EndpointTail,  ///< lim b1 >= lim b2 at x = 0, while every point past of P2 ends strictly below
    NoWitness,     ///< search exhausted without a verified witness
    ByDefinition,  ///< relations involving i+
};

std::string_view to_string(Certificate c);

struct ExtChronResult {
    Verdict verdict = Verdict::Indeterminate;
    Certificate certificate = Certificate::NoWitness;
    std::optional<Point> witness;
    std::optional<double> s_violation; ///< an s where b1(s) >= b2(s) for NotSubset
    std::string detail;
};

/// Witness ladder parameters for the extended chronology.
struct WitnessSearch {
    std::vector<double> offsets{0.1, 0.01, 0.001};
    double xi_start = -5.0;
    double xi_ratio = 0.25;
    int xi_count = 11;
};

enum class PairClass { TimelikeForward, TimelikeBackward, Horismos, Unrelated, Equal, Indeterminate };

std::string_view to_string(PairClass c);

/// Relation queries for one metric, caching witness candidates per TIP.
class RelationEngine {
public:
    RelationEngine(ConeField metric, Numerics num = {}, WitnessSearch search = {});

    const ConeField& metric() const noexcept { return metric_; }
    const Numerics& numerics() const noexcept { return num_; }
    const std::vector<double>& grid() const noexcept { return grid_; }

    /// Comparison margin for a pair of past sets.
    double margin(const PastSet& a, const PastSet& b) const;

    LeqResult leq(const TIP& a, const TIP& b) const;
    ExtChronResult ext_chron(const TIP& p1, const TIP& p2);
    PairClass classify(const TIP& p1, const TIP& p2);

private:
    struct Candidate {
        Point p;
        PastSet past;
    };
    const std::vector<Candidate>& candidates(const TIP& p2);
    bool verify_witness(const TIP& p1, const Candidate& c) const;

    ConeField metric_;
    Numerics num_;
    WitnessSearch search_;
    std::vector<double> grid_;
    std::map<std::uint64_t, std::vector<Candidate>> cache_;
};

ExtChronResult ext_chron(const ConeField& metric, const TIP& p1, const TIP& p2,
                         const Numerics& num = {}, const WitnessSearch& search = {});
PairClass classify_pair(const ConeField& metric, const TIP& p1, const TIP& p2,
                        const Numerics& num = {});

struct StrainGroup {
    double endpoint;
    std::vector<std::size_t> members; ///< indices into tips, increasing by inclusion
};

struct BoundaryAtlas {
    std::string metric_id;
    std::vector<TIP> tips;
    std::vector<std::pair<double, std::size_t>> T_line; ///< singleton endpoints, sorted by T
    std::vector<StrainGroup> strain_groups;
    std::vector<std::size_t> jplus;
    TIP i_plus;

    /// Number of distinct endpoints on the timelike line (singletons plus strains).
    std::size_t endpoint_count() const noexcept { return T_line.size() + strain_groups.size(); }
};

BoundaryAtlas build_atlas(const ConeField& metric, std::span<const double> t_seeds,
                          std::span<const Point> j_seeds, const Numerics& num = {});

/// Atlas whose timelike line is generated by the null curves ending at the given
/// endpoints (each must have a unique generator) plus extra seeded TIPs.
BoundaryAtlas endpoint_atlas(const ConeField& metric, std::span<const double> endpoints,
                             std::span<const double> extra_t_seeds,
                             std::span<const Point> j_seeds, const Numerics& num = {});

/// Atlas assembled from already generated TIPs (right-moving generators first,
/// then left-moving ones).
BoundaryAtlas atlas_from_tips(const ConeField& metric, std::vector<TIP> t_tips,
                              std::vector<TIP> j_tips, const Numerics& num = {});

/// Index of the atlas member (timelike line or strain) whose boundary is
/// closest to p on the grid, if within tol.
std::optional<std::size_t> match_in_atlas(const BoundaryAtlas& atlas, const PastSet& p,
                                          std::span<const double> grid, double tol,
                                          double* distance = nullptr);

/// Sup distance between two boundary functions on a grid (+inf when exactly one is V).
double boundary_distance(const PastSet& a, const PastSet& b, std::span<const double> grid);

/// Pairwise classification of the timelike-line and strain TIPs followed by
/// the null-infinity TIPs; rows and columns in atlas order.
struct RelationMatrix {
    std::vector<std::size_t> order; ///< tip indices
    std::vector<std::vector<PairClass>> cls;
};

RelationMatrix relation_matrix(RelationEngine& engine, const BoundaryAtlas& atlas);

enum class LimitVerdict { Converges, Diverges, Indeterminate };

std::string_view to_string(LimitVerdict v);

struct LimitResult {
    LimitVerdict verdict;
    std::vector<double> distances; ///< sup distance to the candidate per sequence element
};

/// Pointwise convergence of boundary functions on the grid.
LimitResult chron_limit(std::span<const TIP> sequence, const TIP& candidate,
                        std::span<const double> grid, double tol = 1e-4);

/// Collapses each strain to its inclusion-maximal member.
BoundaryAtlas quotient_strain(const BoundaryAtlas& atlas);

struct IsoReport {
    bool pass = true;
    std::size_t endpoints_checked = 0;
    std::size_t pairs_checked = 0;
    std::vector<std::string> violations;
};

using EndpointPairing = std::function<double(double)>;

/// Checks that the pairing is an order bijection on endpoints, that each paired
/// endpoint carries the same number of TIPs, and that pair classes agree.
IsoReport atlas_iso_check(const BoundaryAtlas& a1, const BoundaryAtlas& a2,
                          const EndpointPairing& pairing, const Numerics& num = {},
                          double endpoint_tol = 1e-5);

} // namespace cbound
