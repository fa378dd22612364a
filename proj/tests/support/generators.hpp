#pragma once

// Seeded generators for property-style tests.

#include <cstdint>
#include <random>

#include "spin_stirling/cycle.hpp"

namespace spin_stirling::testing {

class SpecGenerator {
 public:
  explicit SpecGenerator(std::uint64_t seed) : rng_(seed) {}

  /// J/k_B uniform on [-jmax, jmax] excluding |J| < 1e-6, T_c uniform on
  /// [tmin, tmax], T_h = T_c * u with u uniform on (1, ratio_max].
  CycleSpec next(double jmax = 200.0, double tmin = 5.0, double tmax = 400.0,
                 double ratio_max = 10.0) {
    while (true) {
      const double ja = coupling(jmax);
      const double jb = coupling(jmax);
      if (ja == jb) continue;
      const double tc = std::uniform_real_distribution<double>(tmin, tmax)(rng_);
      double u = 1.0;
      while (!(u > 1.0)) u = std::uniform_real_distribution<double>(1.0, ratio_max)(rng_);
      return CycleSpec(Coupling(ja), Coupling(jb), Temperature(tc * u), Temperature(tc));
    }
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  std::mt19937_64& engine() { return rng_; }

 private:
  double coupling(double jmax) {
    while (true) {
      const double j = std::uniform_real_distribution<double>(-jmax, jmax)(rng_);
      if (std::abs(j) >= 1e-6) return j;
    }
  }

  std::mt19937_64 rng_;
};

}  // namespace spin_stirling::testing
