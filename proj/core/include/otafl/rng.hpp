#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "otafl/types.hpp"

namespace otafl {

using Rng = std::mt19937_64;

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}
}  // namespace detail

/// Independent generator for (seed, stream). Streams with different indices
/// never share state, so parallel trials stay reproducible.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  const std::uint64_t a = detail::splitmix64(seed);
  const std::uint64_t b = detail::splitmix64(a ^ detail::splitmix64(stream + 0x632BE59BD9B4E019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return Rng(seq);
}

inline double normal(Rng& rng, double mean, double stddev) {
  if (stddev == 0.0) return mean;
  std::normal_distribution<double> dist(mean, stddev);
  return dist(rng);
}

/// Circularly-symmetric complex Gaussian with E|z|^2 = stddev^2.
inline Complex complex_normal(Rng& rng, double stddev) {
  if (stddev == 0.0) return {0.0, 0.0};
  std::normal_distribution<double> dist(0.0, stddev / std::sqrt(2.0));
  const double re = dist(rng);
  const double im = dist(rng);
  return {re, im};
}

}  // namespace otafl
