#pragma once

// Seeded randomness with platform-stable mappings. std::mt19937_64 output is
// fixed by the standard, but the std distributions are not, so bounded ints
// and reals are derived here.

#include <cstdint>
#include <random>

namespace corpuslens {

using Rng = std::mt19937_64;

/// Uniform in [0, n), unbiased (rejection on the short tail). n must be > 0.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % n;
}

/// Uniform in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

}  // namespace corpuslens
