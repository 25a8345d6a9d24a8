#pragma once

#include <random>

namespace vne {

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline double exponential(Rng& rng, double rate) {
    return std::exponential_distribution<double>(rate)(rng);
}

}  // namespace vne
