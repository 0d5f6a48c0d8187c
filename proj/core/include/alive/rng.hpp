#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace alive {

/// Explicit randomness stream. Every sampler in the library takes one of these
/// by reference; there is no global generator.
///
/// Satisfies UniformRandomBitGenerator so the standard distributions can be
/// driven from it directly.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1).
  double uniform_open() {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return u;
  }

  /// Uniform on {0, ..., n - 1}; n must be positive.
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  double normal() { return normal_(engine_); }
  double normal(double mean, double sd) { return mean + sd * normal_(engine_); }
  double exponential() { return -std::log1p(-uniform()); }

  static constexpr std::string_view generator_name() { return "mt19937_64"; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Derives an independent stream seed from a base seed and a replicate or
/// purpose index (splitmix64 finalizer over the combined words).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace alive
