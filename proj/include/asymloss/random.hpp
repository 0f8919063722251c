#pragma once

#include <cstdint>
#include <random>

namespace asymloss {

using Rng = std::mt19937_64;

/// Seed for chunk `index` of a stream rooted at `seed` (splitmix64 finalizer
/// over both words). Chunks are the unit of reproducible parallel sampling.
inline std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(seed) ^ index);
}

/// Uniform draw on the open interval (0, 1) with 53 random bits.
inline double uniform_open(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

inline bool random_sign_bit(Rng& rng) { return (rng() >> 63) != 0; }

inline constexpr std::uint64_t kSampleChunk = std::uint64_t{1} << 16;

}  // namespace asymloss
