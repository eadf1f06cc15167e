#include "cbound/gridoracle.hpp"

#include "cbound/error.hpp"

#include <cmath>
#include <random>

namespace cbound {

namespace {

int snap_index(double v, double lo, double h, int n) {
    const double f = (v - lo) / h;
    int k = static_cast<int>(std::ceil(f - 0.5));
    if (k < 0 || k >= n) {
        // Points on the box edge may round just outside.
        if (k == -1 && f > -0.5 - 1e-9) k = 0;
        else if (k == n && f < n - 0.5 + 1e-9) k = n - 1;
        else throw DomainError("oracle: point outside the bounding box");
    }
    return k;
}

} // namespace

GridOracle GridOracle::build(const ConeField& metric, const BBox& box, double h, int max_dx_steps,
                             double margin) {
    if (!(h > 0.0)) throw InvalidInput("build_oracle: h must be positive");
    if (!(box.x_max < 0.0)) throw InvalidInput("build_oracle: box touches x = 0");
    if (!(box.t_max >= box.t_min) || !(box.x_max >= box.x_min))
        throw InvalidInput("build_oracle: malformed box");
    if (h > box.t_max - box.t_min || (box.x_max > box.x_min && h > box.x_max - box.x_min))
        throw InvalidInput("build_oracle: h exceeds the box extent");

    GridOracle o;
    o.box_ = box;
    o.h_ = h;
    o.metric_id_ = std::string(metric.id());
    o.n_t_ = static_cast<int>(std::floor((box.t_max - box.t_min) / h + 1e-9)) + 1;
    o.n_x_ = static_cast<int>(std::floor((box.x_max - box.x_min) / h + 1e-9)) + 1;
    const std::size_t nodes = static_cast<std::size_t>(o.n_t_) * static_cast<std::size_t>(o.n_x_);
    o.words_ = (nodes + 63) / 64;
    o.reach_.assign(nodes * o.words_, 0);
    const int D = max_dx_steps < 0 ? o.n_x_ - 1 : std::min(max_dx_steps, o.n_x_ - 1);

    auto row = [&](std::size_t v) { return o.reach_.data() + v * o.words_; };
    // Rows are processed from the top so successors are complete when read.
    for (int i = o.n_t_ - 1; i >= 0; --i) {
        for (int j = 0; j < o.n_x_; ++j) {
            const Point p = o.node(i, j);
            std::uint64_t* dst = row(o.index(i, j));
            for (int d = -D; d <= D; ++d) {
                const int j2 = j + d;
                if (j2 < 0 || j2 >= o.n_x_) continue;
                for (int k = 1; i + k < o.n_t_; ++k) {
                    const Point q = o.node(i + k, j2);
                    const double vt = k * h;
                    const double vx = d * h;
                    if (is_causal_vector(metric, p, vt, vx, margin) != Ternary::Inside ||
                        is_causal_vector(metric, q, vt, vx, margin) != Ternary::Inside)
                        continue;
                    const std::size_t w = o.index(i + k, j2);
                    dst[w / 64] |= std::uint64_t{1} << (w % 64);
                    const std::uint64_t* src = row(w);
                    for (std::size_t b = 0; b < o.words_; ++b) dst[b] |= src[b];
                    break;
                }
            }
        }
    }
    return o;
}

Point GridOracle::node(int i, int j) const {
    return Point(box_.t_min + i * h_, box_.x_min + j * h_);
}

std::pair<int, int> GridOracle::snap(const Point& p) const {
    return {snap_index(p.t(), box_.t_min, h_, n_t_), snap_index(p.x(), box_.x_min, h_, n_x_)};
}

bool GridOracle::reaches(int i1, int j1, int i2, int j2) const {
    const std::size_t w = index(i2, j2);
    return (reach_[index(i1, j1) * words_ + w / 64] >> (w % 64)) & 1U;
}

GridOracle build_oracle(const ConeField& metric, const BBox& box, double h) {
    return GridOracle::build(metric, box, h);
}

bool oracle_chron(const GridOracle& o, const Point& p, const Point& q) {
    const auto [i1, j1] = o.snap(p);
    const auto [i2, j2] = o.snap(q);
    return o.reaches(i1, j1, i2, j2);
}

CrosscheckReport crosscheck(const ConeField& metric, const GridOracle& o, std::size_t n_samples,
                            std::uint64_t seed, const Numerics& num) {
    if (metric.id() != o.metric_id()) throw InvalidInput("crosscheck: oracle built for another metric");
    CrosscheckReport rep;
    rep.band = 2.0 * o.h();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> ri(0, o.rows() - 1);
    std::uniform_int_distribution<int> rj(0, o.cols() - 1);
    const auto& b = o.box();
    std::uniform_real_distribution<double> ut(b.t_min, b.t_max);
    std::uniform_real_distribution<double> ux(b.x_min, b.x_max);
    for (std::size_t n = 0; n < n_samples; ++n) {
        Point p(ut(rng), ux(rng));
        Point q(ut(rng), ux(rng));
        if (p.t() > q.t()) std::swap(p, q);
        const auto [i1, j1] = o.snap(p);
        const auto [i2, j2] = o.snap(q);
        const Point ps = o.node(i1, j1);
        const Point qs = o.node(i2, j2);
        const bool orc = o.reaches(i1, j1, i2, j2);
        const Ternary cont = chron_rel(metric, ps, qs, num);
        ++rep.samples;
        if (orc && cont == Ternary::Outside) ++rep.unsound;
        if (orc == (cont == Ternary::Inside)) {
            ++rep.agreements;
            continue;
        }
        ++rep.disagreements;
        const double dist = std::abs(ps.t() - point_past_boundary(metric, qs, ps.x(), num));
        if (dist > rep.band) rep.violations.push_back({ps, qs, orc, cont, dist});
    }
    return rep;
}

} // namespace cbound
