// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace ceui {

/// Seeded generator with distribution transforms written out explicitly, so a
/// given seed yields the same stream with any standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double rayleigh(double sigma) { return sigma * std::sqrt(-2.0 * std::log1p(-uniform())); }

  double exponential() { return -std::log1p(-uniform()); }

  /// Standard normal, Box-Muller (one value per call, the partner is discarded).
  double gaussian() {
    const double r = std::sqrt(-2.0 * std::log1p(-uniform()));
    return r * std::cos(2.0 * std::numbers::pi * uniform());
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ceui
