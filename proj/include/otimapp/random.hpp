#pragma once

#include <cstdint>
#include <random>

namespace otimapp {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent streams from one seed.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return split_seed(split_seed(seed, a), b);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(mix64(seed)); }

// Uniform index in [0, n). n must be positive.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace otimapp
