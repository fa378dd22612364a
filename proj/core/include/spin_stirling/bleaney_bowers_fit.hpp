#pragma once

// Least-squares fit of the Bleaney-Bowers susceptibility
//
//   chi(T; J, g) = (2 C g^2 / T) / (3 + e^{J/k_B T}),   C = N_A mu_B^2 / k_B
//
// to a measured chi(T) series, minimising sum_i (chi(T_i) - chi_i)^2 with a
// Levenberg-Marquardt iteration on the analytic Jacobian. When g is free it
// is eliminated first: g^2 enters linearly, so its optimum for a given J is
// closed-form and the iteration runs on J alone.

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "spin_stirling/magnetometry.hpp"

namespace spin_stirling {

/// Hold g fixed; only J is fitted.
struct FixG {
  double value = 2.1;
};

/// Fit g together with J. `initial` must be positive; it is only used as the
/// starting g when the profile scan cannot provide one.
struct FreeG {
  double initial = 2.1;
};

using GPolicy = std::variant<FixG, FreeG>;

struct FitOptions {
  int max_iterations = 200;
  /// Convergence when the scaled gradient |J^T r|_k / (|J_k| |r|) drops below this.
  double gradient_tolerance = 1e-8;
  /// ...or when |r| <= residual_tolerance * |chi| (exact fit).
  double residual_tolerance = 1e-12;
  /// Stop when every parameter step is below step_tolerance * (|p| + step_tolerance).
  double step_tolerance = 1e-15;
  double initial_damping = 1e-3;
  double damping_increase = 10.0;
  double damping_decrease = 10.0;
  /// Coarse scan that seeds J.
  double scan_min_k = -500.0;
  double scan_max_k = 500.0;
  std::size_t scan_points = 1001;
};

struct FitResult {
  double j_over_kb = 0.0;
  double g = 0.0;
  double residual_rms = 0.0;        // emu/mol
  std::vector<double> covariance_diag;  // (J, g) or (J) when g is fixed
  bool converged = false;
  int iterations = 0;
  double gradient_norm = 0.0;       // scaled, see FitOptions::gradient_tolerance
  std::string diagnostic;
};

/// Never throws for non-convergence (converged = false instead). Throws
/// ValidationError for a bad policy and DataError for an invalid dataset.
FitResult fit_bleaney_bowers(const SusceptibilityDataset& data, GPolicy policy = FixG{},
                             const FitOptions& options = {});

/// chi_model(T_i) - chi_i for every point.
std::vector<double> bleaney_bowers_residuals(const SusceptibilityDataset& data, double j_over_kb,
                                             double g);

struct ResidualJacobian {
  std::vector<double> d_dj;  // d r_i / d J  (per kelvin)
  std::vector<double> d_dg;  // d r_i / d g
};

ResidualJacobian bleaney_bowers_jacobian(const SusceptibilityDataset& data, double j_over_kb,
                                         double g);

}  // namespace spin_stirling
