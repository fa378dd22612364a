#pragma once

// Equilibrium state functions of two Heisenberg-coupled spin-1/2 centres,
// H = J S1.S2, with triplet energy J/4 (threefold) and singlet energy -3J/4.
//
// Everything is a function of the reduced coupling x = J/(k_B T). The
// closed forms are arranged so that e^x is never formed for x > 0, which
// keeps them finite for any representable J and T.

#include <array>

#include "spin_stirling/units.hpp"

namespace spin_stirling {

/// A (J, T) pair at thermal equilibrium.
struct ThermalPoint {
  Coupling coupling;
  Temperature temperature;

  /// J / (k_B T).
  double reduced_coupling() const noexcept {
    return coupling.kelvin() / temperature.kelvin();
  }
};

/// Gibbs populations in the coupled basis: the three triplet states share
/// one population, the singlet takes the rest.
struct PopulationVector {
  double p1 = 0.25;
  double p2 = 0.25;
  double p3 = 0.25;
  double p4 = 0.25;

  std::array<double, 4> as_array() const noexcept { return {p1, p2, p3, p4}; }
  double sum() const noexcept { return p1 + p2 + p3 + p4; }
};

/// F(J,T) = 1 / (3 + e^{J/k_B T}), the triplet population. Lies in (0, 1/3)
/// for finite x; underflows to 0 for very large positive x.
double dimensionless_susceptibility(const ThermalPoint& point) noexcept;

/// ln F(J,T) = -ln(3 + e^x), evaluated with log-sum-exp.
double log_dimensionless_susceptibility(const ThermalPoint& point) noexcept;

/// 1 - 3F, the singlet population.
double singlet_population(const ThermalPoint& point) noexcept;

/// Bleaney-Bowers molar susceptibility chi = (2 C g^2 / T) F(J,T) in emu/mol,
/// with C = N_A mu_B^2 / k_B. Throws ValidationError unless g > 0.
double molar_susceptibility(const ThermalPoint& point, double g);

/// Inverse of the Bleaney-Bowers prefactor: F = T chi / (2 C g^2).
/// Throws ValidationError unless g > 0.
double dimensionless_from_molar(double chi_emu_mol, Temperature temperature, double g);

PopulationVector populations(const ThermalPoint& point) noexcept;

/// Von Neumann entropy in units of k_B; x ln x is taken as 0 at x = 0.
double entropy(const ThermalPoint& point) noexcept;

/// ln 4 - S. Accurate to full relative precision near x = 0, where S itself
/// sits on ln 4 and differences of S lose every significant digit.
double entropy_deficit(const ThermalPoint& point) noexcept;

/// U = Tr(rho H) = 3J (F - 1/4), in kelvin (energy / k_B).
double internal_energy(const ThermalPoint& point) noexcept;

/// ln Z with Z = Tr e^{-H/k_B T} = e^{-x/4} (3 + e^x).
double log_partition_function(const ThermalPoint& point) noexcept;

/// Ground multiplet: the triplet (energy J/4, degeneracy 3) for J < 0, the
/// singlet (energy -3J/4, degeneracy 1) for J > 0. At J = 0 the ground
/// "multiplet" is all four states.
struct GroundMultiplet {
  double energy;
  double degeneracy;
};
GroundMultiplet ground_multiplet(Coupling coupling) noexcept;

/// U - E_0 >= 0, exact to rounding however small (low-temperature side).
double excitation_energy(const ThermalPoint& point) noexcept;

/// ln(Z e^{E_0/k_B T} / g_0) >= 0, the thermal weight of the excited
/// multiplet relative to the ground one. S = ln g_0 + this + (U - E_0)/T.
double log_partition_above_ground(const ThermalPoint& point) noexcept;

/// ln Z - ln 4, with the same small-x accuracy as entropy_deficit.
double log_partition_excess(const ThermalPoint& point) noexcept;

}  // namespace spin_stirling
