#ifndef TITANMORPH_TEST_SUPPORT_HPP
#define TITANMORPH_TEST_SUPPORT_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace titanmorph::test {

/// Fixed-seed generator so property tests are reproducible.
inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(0x7177a11u);
    return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline double rel_err(double actual, double expected) {
    return std::abs(actual - expected) / std::max(std::abs(expected), 1e-300);
}

}  // namespace titanmorph::test

#endif
