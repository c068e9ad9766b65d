#pragma once

// Portable pseudo-random streams.
//
// Every draw is a pure function of (seed, counter):
//
//   word(seed, i) = mix64(seed + (i + 1) * 0x9E3779B97F4A7C15)
//   mix64(z): z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//             z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//             return z ^ (z >> 31)
//
// (the SplitMix64 finalizer). Uniform doubles take the top 53 bits of a word.
// Normal deviates use the Box-Muller cosine branch on two consecutive
// uniforms, so a reimplementation in another language reproduces the same
// stream up to the last-ulp behavior of log/cos/sqrt.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace krylovlab {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Child seed for stream `index` under `master`. Distinct indices give
/// statistically independent streams.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(master ^ mix64((index + 1) * kGoldenGamma));
}

class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  constexpr std::uint64_t next_word() noexcept {
    ++counter_;
    return mix64(seed_ + counter_ * kGoldenGamma);
  }

  /// Uniform on [0, 1).
  double uniform() noexcept {
    return static_cast<double>(next_word() >> 11) * 0x1.0p-53;
  }

  /// Standard normal N(0, 1).
  double normal() noexcept {
    // u1 in (0, 1] keeps the logarithm finite.
    const double u1 = static_cast<double>((next_word() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Complex Gaussian with E|z|^2 = 1.
  std::complex<double> complex_normal() noexcept {
    const double re = normal();
    const double im = normal();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
  }

  constexpr std::uint64_t seed() const noexcept { return seed_; }
  constexpr std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace krylovlab
