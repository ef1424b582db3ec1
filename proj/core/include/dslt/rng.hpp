#pragma once

#include <cstdint>
#include <random>

namespace dslt {

// SplitMix64 finalizer. Bijective, good avalanche; the standard choice for
// deriving independent engine seeds from (seed, index) pairs.
inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for the substream `index` of a master seed. Each path / trial gets its
// own engine so results do not depend on thread scheduling.
inline constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 0x51a2b3c4d5e6f708ULL));
}

inline std::mt19937_64 substream_engine(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(substream_seed(seed, index));
}

}  // namespace dslt
