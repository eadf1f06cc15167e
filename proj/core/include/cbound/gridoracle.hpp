#pragma once

// Lattice reachability as an independent inner approximation of the
// chronological relation.

#include "cbound/chronology.hpp"

#include <cstdint>
#include <vector>

namespace cbound {

struct BBox {
    double t_min;
    double t_max;
    double x_min;
    double x_max; ///< < 0
};

/// Nodes (t_min + i h, x_min + j h). A step (k h, d h), k >= 1, is admitted
/// when the step vector is strictly inside the cone at both ends; beta is
/// monotone along a straight segment here, so every admitted step is a
/// timelike chord. Reachability is the transitive closure (irreflexive).
class GridOracle {
public:
    /// max_dx_steps < 0 selects the full row width.
    static GridOracle build(const ConeField& metric, const BBox& box, double h,
                            int max_dx_steps = -1, double margin = kDefaultMargin);

    const BBox& box() const noexcept { return box_; }
    double h() const noexcept { return h_; }
    int rows() const noexcept { return n_t_; }
    int cols() const noexcept { return n_x_; }
    std::string_view metric_id() const noexcept { return metric_id_; }

    /// Nearest node; ties go to the lower index. Throws DomainError outside the box.
    std::pair<int, int> snap(const Point& p) const;
    Point node(int i, int j) const;

    bool reaches(int i1, int j1, int i2, int j2) const;

private:
    GridOracle() = default;
    std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_x_) +
               static_cast<std::size_t>(j);
    }

    BBox box_{};
    double h_ = 0.0;
    int n_t_ = 0;
    int n_x_ = 0;
    std::size_t words_ = 0;
    std::string metric_id_;
    std::vector<std::uint64_t> reach_; ///< one bitset of words_ words per node
};

GridOracle build_oracle(const ConeField& metric, const BBox& box, double h);

/// Reachability between the nodes nearest to p and q.
bool oracle_chron(const GridOracle& o, const Point& p, const Point& q);

struct Disagreement {
    Point p;
    Point q;
    bool oracle;
    Ternary continuous;
    double distance; ///< |t_p - b_q(x_p)| at the snapped nodes
};

struct CrosscheckReport {
    std::size_t samples = 0;
    std::size_t agreements = 0;
    std::size_t disagreements = 0;
    std::size_t unsound = 0; ///< oracle true while the continuous relation is Outside
    double band = 0.0;       ///< 2h
    std::vector<Disagreement> violations; ///< disagreements farther than the band
};

CrosscheckReport crosscheck(const ConeField& metric, const GridOracle& o, std::size_t n_samples,
                            std::uint64_t seed, const Numerics& num = {});

} // namespace cbound
