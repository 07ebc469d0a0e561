// SPDX-License-Identifier: Apache-2.0
#include "vidsum/rng.hpp"

#include <cmath>

namespace vidsum {

std::uint64_t SplitMix64::uniform_below(std::uint64_t bound) {
  __uint128_t m = static_cast<__uint128_t>((*this)()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      m = static_cast<__uint128_t>((*this)()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double SplitMix64::standard_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * unit_double((*this)()) - 1.0;
    v = 2.0 * unit_double((*this)()) - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

}  // namespace vidsum
