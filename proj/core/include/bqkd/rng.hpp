#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace bqkd {

/// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed of the i-th child stream of `master`: mix64(master ^ i).
std::uint64_t split_seed(std::uint64_t master, std::uint64_t i) noexcept;

// Fixed stream ids for the parties of one run.
inline constexpr std::uint64_t kAliceStream = 1;
inline constexpr std::uint64_t kBobStream = 2;
inline constexpr std::uint64_t kEveStream = 3;

/// Seeded random source. Draws are produced with explicit bit manipulation
/// rather than <random> distributions so sequences are identical on every
/// standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  int index(int n);

  /// Standard normal via Box-Muller (one value per call, no caching).
  double normal();

  bool bernoulli(double p) { return uniform() < p; }

  /// Inverse-CDF draw over a probability vector. Returns the smallest k with
  /// u < cdf[k]; zero-probability entries are never selected.
  int sample(std::span<const double> probs);

 private:
  std::mt19937_64 engine_;
};

}  // namespace bqkd
