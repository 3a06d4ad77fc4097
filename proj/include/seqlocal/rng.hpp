#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace seqlocal {

// Counter-based SplitMix64 stream. Every draw is a pure function of (seed, counter), so
// results do not depend on the platform's <random> distributions, and split() gives
// independent child streams for parallel batches that reproduce the serial order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(mix(seed)) {}

  std::uint64_t next_u64() { return mix(seed_ + kGamma * ++counter_); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1].
  double uniform_open_low() { return 1.0 - uniform(); }

  std::uint64_t below(std::uint64_t n) {
    // Rejection keeps the draw exactly uniform.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r = next_u64();
    while (r >= limit) r = next_u64();
    return r % n;
  }

  /// Standard normal by Box-Muller; no cached second value so the stream stays stateless.
  double normal() {
    const double u1 = uniform_open_low();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double exponential() { return -std::log(uniform_open_low()); }

  /// Flat Dirichlet weights of length n.
  std::vector<double> dirichlet(std::size_t n) {
    std::vector<double> w(n);
    double total = 0.0;
    for (auto& x : w) {
      x = exponential();
      total += x;
    }
    for (auto& x : w) x /= total;
    return w;
  }

  /// Independent child stream; split(i) is the same regardless of how many draws were made.
  Rng split(std::uint64_t stream) const { return Rng(seed_ ^ mix(stream + 0x632be59bd9b4e019ULL), 0); }

 private:
  Rng(std::uint64_t mixed, int) : seed_(mix(mixed)) {}

  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace seqlocal
