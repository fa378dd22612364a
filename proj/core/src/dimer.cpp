#include "spin_stirling/dimer.hpp"

#include <cmath>

#include "spin_stirling/error.hpp"

namespace spin_stirling {

namespace {

const double kLn3 = std::log(3.0);
const double kLn4 = std::log(4.0);

// ln(3 + e^x)
double log_three_plus_exp(double x) noexcept {
  if (x > 0.0) {
    return x + std::log1p(3.0 * std::exp(-x));
  }
  return kLn3 + std::log1p(std::exp(x) / 3.0);
}

double triplet_weight(double x) noexcept {
  if (x > 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + 3.0 * e);
  }
  return 1.0 / (3.0 + std::exp(x));
}

double singlet_weight(double x) noexcept {
  if (x > 0.0) {
    return 1.0 / (1.0 + 3.0 * std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (3.0 + e);
}

// ln(1 - 3F) = x - ln(3 + e^x)
double log_singlet_weight(double x) noexcept {
  if (x > 0.0) {
    return -std::log1p(3.0 * std::exp(-x));
  }
  return x - log_three_plus_exp(x);
}

// F - 1/4 = (1 - e^x) / (4 (3 + e^x)), kept accurate around x = 0.
double triplet_excess(double x) noexcept {
  if (x > 0.0) {
    const double e = std::exp(-x);
    return std::expm1(-x) / (4.0 * (1.0 + 3.0 * e));
  }
  return -std::expm1(x) / (4.0 * (3.0 + std::exp(x)));
}

// ln Z - ln 4 = ln[(3 e^{-x/4} + e^{3x/4}) / 4], which is O(x^2) near 0.
double partition_excess(double x) noexcept {
  const double ax = std::abs(x);
  if (ax < 1e-3) {
    // Taylor series; the first omitted term is O(x^9).
    const double x2 = x * x;
    return x2 * (3.0 / 32 + x * (1.0 / 64 + x * (-1.0 / 1024 + x * (-1.0 / 1024 +
           x * (-13.0 / 122880 + x * (11.0 / 245760 + x * (823.0 / 55050240)))))));
  }
  if (ax <= 2.0) {
    return std::log1p((3.0 * std::expm1(-0.25 * x) + std::expm1(0.75 * x)) / 4.0);
  }
  return log_three_plus_exp(x) - 0.25 * x - kLn4;
}

void require_positive_g(double g) {
  if (!std::isfinite(g) || !(g > 0.0)) {
    throw ValidationError("Lande factor g must be finite and positive");
  }
}

}  // namespace

double dimensionless_susceptibility(const ThermalPoint& point) noexcept {
  return triplet_weight(point.reduced_coupling());
}

double log_dimensionless_susceptibility(const ThermalPoint& point) noexcept {
  return -log_three_plus_exp(point.reduced_coupling());
}

double singlet_population(const ThermalPoint& point) noexcept {
  return singlet_weight(point.reduced_coupling());
}

double molar_susceptibility(const ThermalPoint& point, double g) {
  require_positive_g(g);
  const double t = point.temperature.kelvin();
  return 2.0 * constants::kMolarCurie * g * g / t * dimensionless_susceptibility(point);
}

double dimensionless_from_molar(double chi_emu_mol, Temperature temperature, double g) {
  require_positive_g(g);
  return temperature.kelvin() * chi_emu_mol / (2.0 * constants::kMolarCurie * g * g);
}

PopulationVector populations(const ThermalPoint& point) noexcept {
  const double x = point.reduced_coupling();
  const double f = triplet_weight(x);
  return {f, f, f, singlet_weight(x)};
}

double entropy(const ThermalPoint& point) noexcept {
  const double x = point.reduced_coupling();
  if (x == 0.0) {
    return std::log(4.0);
  }
  const double f = triplet_weight(x);
  const double p4 = singlet_weight(x);
  double s = 0.0;
  if (f > 0.0) {
    s += 3.0 * f * log_three_plus_exp(x);
  }
  if (p4 > 0.0) {
    s -= p4 * log_singlet_weight(x);
  }
  return s;
}

double entropy_deficit(const ThermalPoint& point) noexcept {
  const double x = point.reduced_coupling();
  if (std::abs(x) <= 2.0) {
    // ln 4 - S = -(ln Z - ln 4) - x U/J, both terms O(x^2)
    return -partition_excess(x) - 3.0 * x * triplet_excess(x);
  }
  return kLn4 - entropy(point);
}

GroundMultiplet ground_multiplet(Coupling coupling) noexcept {
  const double j = coupling.kelvin();
  if (j < 0.0) return {0.25 * j, 3.0};
  if (j > 0.0) return {-0.75 * j, 1.0};
  return {0.0, 4.0};
}

double excitation_energy(const ThermalPoint& point) noexcept {
  const double j = point.coupling.kelvin();
  const double x = point.reduced_coupling();
  if (j < 0.0) {
    return -j * singlet_weight(x);
  }
  if (j > 0.0) {
    return 3.0 * j * triplet_weight(x);
  }
  return 0.0;
}

double log_partition_above_ground(const ThermalPoint& point) noexcept {
  const double x = point.reduced_coupling();
  if (x < 0.0) {
    return std::log1p(std::exp(x) / 3.0);
  }
  if (x > 0.0) {
    return std::log1p(3.0 * std::exp(-x));
  }
  return 0.0;
}

double internal_energy(const ThermalPoint& point) noexcept {
  const double j = point.coupling.kelvin();
  if (j == 0.0) {
    return 0.0;
  }
  return 3.0 * j * triplet_excess(point.reduced_coupling());
}

double log_partition_function(const ThermalPoint& point) noexcept {
  const double x = point.reduced_coupling();
  return log_three_plus_exp(x) - 0.25 * x;
}

double log_partition_excess(const ThermalPoint& point) noexcept {
  return partition_excess(point.reduced_coupling());
}

}  // namespace spin_stirling
