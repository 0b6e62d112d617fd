#pragma once

// Pinned random primitives on top of std::mt19937_64.
//
// The standard pins the mt19937_64 engine output exactly, but leaves
// distribution algorithms implementation-defined, so std::*_distribution
// would make results depend on the standard library version. Everything
// here is spelled out explicitly: a given seed yields the same draws on
// any conforming platform.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace vrig {

// Uniform draw in [0, 1) with 53-bit resolution; consumes one engine value.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform draw in [lo, hi); consumes one engine value.
inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  return lo + uniform01(rng) * (hi - lo);
}

// Standard normal via Box-Muller; consumes exactly two engine values.
inline double standard_normal(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  if (u1 <= 0.0) u1 = 0x1.0p-53;  // keep log() finite
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace vrig
