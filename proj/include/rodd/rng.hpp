#pragma once

// Counter-based pseudo-random functions. Every random quantity in the library
// is a pure function of (key, counter), so any draw can be recomputed in O(1)
// without generating a prefix, and results do not depend on thread count.
// std:: distributions are avoided because their output is implementation
// defined.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace rodd::rng {

/// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

/// Derives a stream key from two words. Not commutative in its arguments.
constexpr std::uint64_t combine(std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(mix64(a + kGolden) ^ (b * 0xd6e8feb86659fd93ULL + 0x632be59bd9b4e019ULL));
}

/// Output word number `counter` of the stream identified by `key`.
constexpr std::uint64_t word(std::uint64_t key, std::uint64_t counter) noexcept {
  return mix64(key + (counter + 1) * kGolden);
}

/// Uniform double in [0, 1) built from the top 53 bits.
constexpr double to_unit(std::uint64_t w) noexcept {
  return static_cast<double>(w >> 11) * 0x1.0p-53;
}

/// Sequential view over a keyed stream.
class Stream {
 public:
  constexpr explicit Stream(std::uint64_t key, std::uint64_t start = 0) noexcept
      : key_(key), counter_(start) {}

  constexpr std::uint64_t next_word() noexcept { return word(key_, counter_++); }

  constexpr double uniform() noexcept { return to_unit(next_word()); }

  /// Uniform in (0, 1]; safe as a log argument.
  constexpr double uniform_open0() noexcept { return 1.0 - uniform(); }

  double exponential() noexcept { return -std::log(uniform_open0()); }

  /// Standard normal via Box-Muller; one draw per call, the sibling is discarded.
  double normal() noexcept {
    const double r = std::sqrt(-2.0 * std::log(uniform_open0()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    return r * std::cos(theta);
  }

  constexpr bool bernoulli(double p) noexcept { return uniform() < p; }

  constexpr std::uint64_t key() const noexcept { return key_; }
  constexpr std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace rodd::rng
