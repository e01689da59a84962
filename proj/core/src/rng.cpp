#include "bqkd/rng.hpp"

#include <cmath>
#include <numbers>

namespace bqkd {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t split_seed(std::uint64_t master, std::uint64_t i) noexcept {
  return mix64(master ^ i);
}

int Rng::index(int n) {
  auto k = static_cast<int>(uniform() * n);
  return k < n ? k : n - 1;
}

double Rng::normal() {
  double u1 = uniform();
  double u2 = uniform();
  // 1 - u1 lies in (0, 1], so the log is finite.
  double r = std::sqrt(-2.0 * std::log(1.0 - u1));
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

int Rng::sample(std::span<const double> probs) {
  const double u = uniform();
  double cdf = 0.0;
  int last_nonzero = -1;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] <= 0.0) continue;
    cdf += probs[k];
    last_nonzero = static_cast<int>(k);
    if (u < cdf) return last_nonzero;
  }
  // Rounding left the total slightly below u.
  return last_nonzero < 0 ? 0 : last_nonzero;
}

}  // namespace bqkd
