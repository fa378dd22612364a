#include "spin_stirling/units.hpp"

#include <cmath>
#include <string>

#include "spin_stirling/error.hpp"

namespace spin_stirling {

Coupling::Coupling(double j_over_kb, double cap) : j_over_kb_(j_over_kb) {
  if (!std::isfinite(j_over_kb)) {
    throw ValidationError("coupling J/k_B must be finite");
  }
  if (!(cap > 0.0) || std::abs(j_over_kb) > cap) {
    throw ValidationError("coupling |J/k_B| = " + std::to_string(std::abs(j_over_kb)) +
                          " K exceeds cap " + std::to_string(cap) + " K");
  }
}

Temperature::Temperature(double kelvin) : kelvin_(kelvin) {
  if (!std::isfinite(kelvin) || !(kelvin > 0.0)) {
    throw ValidationError("temperature must be finite and strictly positive, got " +
                          std::to_string(kelvin) + " K");
  }
}

}  // namespace spin_stirling
