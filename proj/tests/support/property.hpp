#pragma once

// Seeded generators for property tests. Each case gets its own index so a
// failure can be replayed with the printed seed and case number.

#include "cbound/conefield.hpp"

#include <doctest.h>

#include <cstdint>
#include <random>

namespace cbtest {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin() { return integer(0, 1) == 1; }

    /// Point in [t_lo, t_hi] x [x_lo, x_hi] (x_hi < 0).
    cbound::Point point(double t_lo, double t_hi, double x_lo, double x_hi) {
        return {uniform(t_lo, t_hi), uniform(x_lo, x_hi)};
    }

    std::mt19937_64& engine() noexcept { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// Runs prop(gen, case) n times; the seed and case index are attached to any failure.
template <class Prop>
void for_all(std::uint64_t seed, int n, Prop&& prop) {
    Gen gen(seed);
    for (int i = 0; i < n; ++i) {
        INFO("property seed " << seed << ", case " << i);
        prop(gen, i);
    }
}

} // namespace cbtest
