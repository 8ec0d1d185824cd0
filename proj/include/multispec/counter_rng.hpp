#pragma once

#include <cstdint>

namespace multispec {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stateless hash of (seed, a, b, stream). Each argument passes through a
/// full mixing round, so nearby counters give unrelated outputs.
constexpr std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                                     std::uint64_t stream) {
  std::uint64_t x = splitmix64(seed ^ 0x6a09e667f3bcc908ULL);
  x = splitmix64(x ^ a);
  x = splitmix64(x ^ (b + 0x3c6ef372fe94f82bULL));
  return splitmix64(x ^ (stream * 0xbb67ae8584caa73bULL));
}

/// Uniform on [0, 1) with 53 random bits.
constexpr double unit_interval(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Uniform on (0, 1].
constexpr double open_unit_interval(std::uint64_t h) {
  return static_cast<double>((h >> 11) + 1) * 0x1.0p-53;
}

namespace streams {
inline constexpr std::uint64_t kEdge = 1;
inline constexpr std::uint64_t kWeight = 2;
inline constexpr std::uint64_t kWeightAux = 3;
inline constexpr std::uint64_t kTrial = 4;
inline constexpr std::uint64_t kProbe = 5;
}  // namespace streams

/// Seed of trial `trial` at size `n`, a pure function of the base seed.
constexpr std::uint64_t trial_seed(std::uint64_t base, std::uint64_t n, std::uint64_t trial) {
  return counter_hash(base, n, trial, streams::kTrial);
}

}  // namespace multispec
