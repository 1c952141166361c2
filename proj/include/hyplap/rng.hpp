#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace hyplap {

/// All randomness in the library flows through this generator, seeded
/// explicitly by the caller. Distributions are implemented below rather
/// than taken from <random>, so that a given seed produces the same
/// stream on every platform and standard library.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits of one generator draw.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Unbiased uniform integer in [0, n); n must be positive.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return x % n;
}

/// In-place Fisher-Yates shuffle driven by uniform_index.
template <typename T>
void fisher_yates_shuffle(std::vector<T>& values, Rng& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const auto k = static_cast<std::size_t>(uniform_index(rng, i));
        std::swap(values[i - 1], values[k]);
    }
}

/// splitmix64 finalizer; derives independent child seeds from a base seed
/// and a salt, e.g. one stream per (instance, method) pair.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace hyplap
