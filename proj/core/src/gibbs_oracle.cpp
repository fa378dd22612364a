#include "spin_stirling/gibbs_oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spin_stirling/error.hpp"

namespace spin_stirling {

namespace {

using Matrix4 = Eigen::Matrix4d;
using Vector4 = Eigen::Vector4d;

// S1.S2 = (sx sx + sy sy + sz sz) / 4 with Pauli matrices, written out in
// the product basis. sy sy is real: (i)(i) and (-i)(-i) terms give -1 on the
// anti-diagonal corners and +1 on the (ud, du) pair.
Matrix4 spin_exchange_operator() {
  Matrix4 sxsx = Matrix4::Zero();
  sxsx(0, 3) = sxsx(3, 0) = 1.0;
  sxsx(1, 2) = sxsx(2, 1) = 1.0;

  Matrix4 sysy = Matrix4::Zero();
  sysy(0, 3) = sysy(3, 0) = -1.0;
  sysy(1, 2) = sysy(2, 1) = 1.0;

  Matrix4 szsz = Vector4(1.0, -1.0, -1.0, 1.0).asDiagonal();

  return 0.25 * (sxsx + sysy + szsz);
}

// Reference states used to put eigenvectors in a fixed order.
std::array<Vector4, 4> reference_states() {
  const double r = 1.0 / std::sqrt(2.0);
  return {Vector4(1.0, 0.0, 0.0, 0.0), Vector4(0.0, r, r, 0.0), Vector4(0.0, 0.0, 0.0, 1.0),
          Vector4(0.0, r, -r, 0.0)};
}

}  // namespace

GibbsOracleResult gibbs_oracle(const ThermalPoint& point) {
  const double j = point.coupling.kelvin();
  const double t = point.temperature.kelvin();
  if (std::abs(j / t) > constants::kExponentCap) {
    throw OverflowError("gibbs_oracle: |J/(k_B T)| = " + std::to_string(std::abs(j / t)) +
                        " exceeds " + std::to_string(constants::kExponentCap));
  }

  const Matrix4 hamiltonian = j * spin_exchange_operator();
  Eigen::SelfAdjointEigenSolver<Matrix4> solver(hamiltonian);
  const Vector4 eigenvalues = solver.eigenvalues();
  const Matrix4 eigenvectors = solver.eigenvectors();

  // The triplet is degenerate, so the solver may hand back any rotation of
  // it. Project the reference states onto each eigenspace instead of
  // trusting individual eigenvectors.
  const auto refs = reference_states();
  std::array<double, 4> energies{};
  for (int k = 0; k < 4; ++k) {
    // sum_i lambda_i |<v_i|ref_k>|^2
    const Vector4 overlaps = eigenvectors.transpose() * refs[k];
    energies[k] = (overlaps.array().square() * eigenvalues.array()).sum();
  }

  // Boltzmann weights from the numerically obtained spectrum.
  const double e_min = eigenvalues.minCoeff();
  Vector4 weights;
  for (int i = 0; i < 4; ++i) {
    weights(i) = std::exp(-(eigenvalues(i) - e_min) / t);
  }
  weights /= weights.sum();

  const Matrix4 rho = eigenvectors * weights.asDiagonal() * eigenvectors.transpose();

  GibbsOracleResult result;
  result.energies = energies;

  std::array<double, 4> pops{};
  for (int k = 0; k < 4; ++k) {
    pops[k] = refs[k].dot(rho * refs[k]);
  }
  result.populations = {pops[0], pops[1], pops[2], pops[3]};

  result.internal_energy = (rho * hamiltonian).trace();

  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double w = weights(i);
    if (w > 0.0) {
      s -= w * std::log(w);
    }
  }
  result.entropy = s;
  return result;
}

}  // namespace spin_stirling
