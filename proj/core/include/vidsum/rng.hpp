// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace vidsum {

/// SplitMix64 output function (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Top 53 bits as a double in [0, 1).
constexpr double unit_double(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

/// Counter-based SplitMix64 stream: output k is mix(seed + (k+1) * gamma).
/// Satisfies UniformRandomBitGenerator. Distributions below are written out
/// so that streams are identical on every platform.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  static constexpr std::string_view kName = "splitmix64";

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ull;
    return splitmix64_mix(state_);
  }

  /// Uniform integer in [0, bound), bound > 0 (Lemire's multiply-shift with rejection).
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Uniform integer in [lo, hi).
  std::uint64_t uniform_range(std::uint64_t lo, std::uint64_t hi) { return lo + uniform_below(hi - lo); }

  /// Standard normal draw (Marsaglia polar method).
  double standard_normal();

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Seed for the i-th independent sub-stream of `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t i) { return splitmix64_mix(seed ^ i); }

}  // namespace vidsum
