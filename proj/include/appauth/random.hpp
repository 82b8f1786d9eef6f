#pragma once

// Platform-independent draws on top of std::mt19937_64. The standard
// distributions are implementation-defined, which would make seeded output
// differ between standard libraries.

#include <cmath>
#include <cstdint>
#include <random>

namespace appauth {

using Rng = std::mt19937_64;

/// Uniform on (0, 1].
inline double uniform_open0(Rng& rng) {
    return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

/// Uniform on [0, 1).
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double exponential(Rng& rng, double mean) { return -mean * std::log(uniform_open0(rng)); }

/// Uniform integer in [0, n).
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform01(rng) * static_cast<double>(n)) % n;
}

/// Derives an independent stream seed from a base seed and a stream id (splitmix64).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace appauth
