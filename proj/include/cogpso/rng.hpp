#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace cogpso {

/// Every stochastic component owns one of these, seeded from its config.
using Rng = std::mt19937_64;

/// Uniform draw on the open interval (0, 1).
inline double uniform_open01(Rng& rng) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    double u = dist(rng);
    while (u == 0.0) u = dist(rng);
    return u;
}

inline double uniform(Rng& rng, double lo, double hi) {
    if (!(hi > lo)) return lo;
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// `count` distinct indices from [0, n), in draw order (partial Fisher-Yates).
inline std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count, Rng& rng) {
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    std::vector<std::size_t> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count && i < n; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(pool[i], pool[pick(rng)]);
        out.push_back(pool[i]);
    }
    return out;
}

}  // namespace cogpso
