#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace polarsim {

using Rng = std::mt19937_64;

// Stateless mixer used to derive independent per-entity seeds from a base seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base ^ splitmix64(stream + 0x6a09e667f3bcc909ULL));
}

// Hand-rolled draw helpers: std::*_distribution output is implementation
// defined, these are stable across standard libraries.
inline double uniform01(Rng& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

inline double uniform_real(Rng& g, double lo, double hi) {
  return lo + (hi - lo) * uniform01(g);
}

// Unbiased integer in [0, n).
inline std::uint64_t uniform_index(Rng& g, std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = g();
  } while (v >= limit);
  return v % n;
}

inline std::int64_t uniform_int(Rng& g, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(uniform_index(g, static_cast<std::uint64_t>(hi - lo + 1)));
}

inline double exponential(Rng& g, double rate) {
  return -std::log1p(-uniform01(g)) / rate;
}

inline bool bernoulli(Rng& g, double p) { return uniform01(g) < p; }

}  // namespace polarsim
