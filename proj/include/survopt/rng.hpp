#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace survopt {

/// splitmix64 step; used to derive well-separated seeds from (seed, stream).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Deterministic per-stream seed so that stream i of run `seed` is
/// independent of execution order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x517cc1b727220a95ull));
}

/// Uniform draw in [0, 1) built from the top 53 bits of the generator
/// output. Avoids std::uniform_real_distribution so the mapping is fixed.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace survopt
