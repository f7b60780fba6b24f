/**
 * This code is part of cplattice.
 *
 * (C) Copyright 2026 cplattice contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace cplattice {

/// Deterministic random source. Distributions are implemented by hand on top
/// of mt19937_64 so that a given seed yields the same stream on every
/// platform (std::normal_distribution and friends are not portable).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller.
  double gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0)
      u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }

  std::complex<double> complex_gaussian() { return {gaussian(), gaussian()}; }

  /// Uniform on the closed disk of the given radius.
  std::complex<double> disk(double radius) {
    const double r = radius * std::sqrt(uniform());
    const double theta = 2.0 * 3.141592653589793238462643383279502884 * uniform();
    return {r * std::cos(theta), r * std::sin(theta)};
  }

private:
  std::mt19937_64 engine_;
};

} // namespace cplattice
