#pragma once

#include <cstdint>
#include <random>

namespace transitopt {

// Randomness helpers. All draws go through the raw mt19937_64 stream so
// results do not depend on the standard library's distribution
// implementations; fixed seeds give bit-identical runs.

/// Uniform double in [0, 1).
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  return lo + uniform01(rng) * (hi - lo);
}

/// Uniform double in (lo, hi]; used for weights that must stay positive.
inline double uniform_left_open(std::mt19937_64& rng, double lo, double hi) {
  return hi - uniform01(rng) * (hi - lo);
}

/// Uniform integer in [0, n).
inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  // Modulo bias is < 2^-40 for the sizes used here.
  return static_cast<std::size_t>(rng() % n);
}

/// Deterministically derives an independent stream seed from a base seed
/// and a salt (instance index, iteration, branch tag, ...).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return derive_seed(derive_seed(base, a), b);
}

/// FNV-1a over arbitrary bytes; used to derive content-addressed seeds.
inline std::uint64_t fnv1a(const void* data, std::size_t len,
                           std::uint64_t h = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace transitopt
