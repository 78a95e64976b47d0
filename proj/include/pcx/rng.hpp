#pragma once

#include <cmath>
#include <cstdint>

namespace pcx {

// One step of SplitMix64 (Steele, Lea & Flood, OOPSLA 2014): Weyl-sequence
// state advance followed by a finalizing mix. Every random quantity in this
// library is drawn from streams built on this generator, so a draw is a pure
// function of (seed, key..., position) and any parallel schedule reproduces
// the sequential results.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based random stream keyed by a seed plus one or two sub-keys.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t state) : state_(state) {}

  /// Sub-stream for (seed, index): state is the mix of the two, so disjoint
  /// indices give statistically independent streams.
  static RandomStream keyed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    return RandomStream(splitmix64_next(s));
  }

  /// Sub-stream for (seed, i, j), e.g. (realization, reaction) pairs.
  static RandomStream keyed(std::uint64_t seed, std::uint64_t i, std::uint64_t j) {
    std::uint64_t s = seed + 0x9e3779b97f4a7c15ULL * (i + 1);
    s = splitmix64_next(s) + 0xbf58476d1ce4e5b9ULL * (j + 1);
    return RandomStream(splitmix64_next(s));
  }

  std::uint64_t next_bits() { return splitmix64_next(state_); }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_bits() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; never returns 0, safe under log().
  double uniform01_open() {
    return static_cast<double>((next_bits() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform on [-1, 1).
  double uniform_sym() { return 2.0 * uniform01() - 1.0; }

  /// Standard normal via Box-Muller; consumes two uniforms per draw.
  double normal() {
    double u1 = uniform01_open();
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  /// Unit-rate exponential.
  double exponential() { return -std::log(uniform01_open()); }

 private:
  std::uint64_t state_;
};

}  // namespace pcx
