#pragma once

#include <array>

#include "spin_stirling/dimer.hpp"

namespace spin_stirling {

/// Thermal state obtained by brute force: the 4x4 Hamiltonian J S1.S2 is
/// built in the product basis {uu, ud, du, dd}, diagonalised numerically,
/// and Boltzmann-weighted. Independent of the closed forms in dimer.hpp.
struct GibbsOracleResult {
  /// Eigenbasis order: the three triplet states (m = +1, 0, -1), then the singlet.
  PopulationVector populations;
  std::array<double, 4> energies{};  // same order, kelvin
  double entropy = 0.0;               // k_B units
  double internal_energy = 0.0;       // kelvin
};

/// Throws OverflowError when |J/(k_B T)| > constants::kExponentCap.
GibbsOracleResult gibbs_oracle(const ThermalPoint& point);

}  // namespace spin_stirling
