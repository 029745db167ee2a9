#pragma once

#include <cstdint>
#include <random>

namespace twoslit {

/// SplitMix64 finalizer; used to derive independent substream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of substream `index` under `seed`, salted per use site so that different simulations
/// sharing a seed do not share streams.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t salt = 0) {
  return splitmix64(splitmix64(seed ^ splitmix64(salt)) + index);
}

using Rng = std::mt19937_64;

inline Rng make_substream(std::uint64_t seed, std::uint64_t index, std::uint64_t salt = 0) {
  return Rng(substream_seed(seed, index, salt));
}

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace twoslit
