#include "spin_stirling/bleaney_bowers_fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "spin_stirling/dimer.hpp"
#include "spin_stirling/error.hpp"

namespace spin_stirling {

namespace {

// Parameter vector: [J, g] when g is free, [J] otherwise.
using Params = std::array<double, 2>;

struct Problem {
  const SusceptibilityDataset& data;
  bool free_g;
  double fixed_g;

  std::size_t n_params() const { return free_g ? 2 : 1; }
  double g_of(const Params& p) const { return free_g ? p[1] : fixed_g; }
};

// Per-point shape m_i = 2 C F(J, T_i) / T_i, so chi_model = g^2 m_i.
std::vector<double> shapes(const SusceptibilityDataset& data, double j) {
  std::vector<double> m(data.points.size());
  const Coupling coupling(j);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double t = data.points[i].temperature_k;
    m[i] = 2.0 * constants::kMolarCurie / t *
           dimensionless_susceptibility(ThermalPoint{coupling, Temperature(t)});
  }
  return m;
}

double sum_squares(const std::vector<double>& r) {
  double s = 0.0;
  for (double v : r) s += v * v;
  return s;
}

// Best g^2 for a given shape in closed form (linear least squares).
double profile_g_squared(const SusceptibilityDataset& data, const std::vector<double>& m) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    num += data.points[i].chi_emu_mol * m[i];
    den += m[i] * m[i];
  }
  return den > 0.0 ? num / den : 0.0;
}

struct Seed {
  double j;
  double g;
};

Seed scan_for_seed(const Problem& prob, double fallback_g, const FitOptions& opt) {
  const std::size_t n = std::max<std::size_t>(opt.scan_points, 2);
  Seed best{0.0, prob.free_g ? fallback_g : prob.fixed_g};
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const double j = opt.scan_min_k + (opt.scan_max_k - opt.scan_min_k) * static_cast<double>(k) /
                                          static_cast<double>(n - 1);
    const auto m = shapes(prob.data, j);
    double g = prob.fixed_g;
    if (prob.free_g) {
      const double g2 = profile_g_squared(prob.data, m);
      g = g2 > 0.0 ? std::sqrt(g2) : fallback_g;
    }
    double cost = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double r = g * g * m[i] - prob.data.points[i].chi_emu_mol;
      cost += r * r;
    }
    if (cost < best_cost) {
      best_cost = cost;
      best = {j, g};
    }
  }
  return best;
}

// Columns of the Jacobian for the active parameters.
std::array<std::vector<double>, 2> active_jacobian(const Problem& prob, const Params& p) {
  auto jac = bleaney_bowers_jacobian(prob.data, p[0], prob.g_of(p));
  return {std::move(jac.d_dj), std::move(jac.d_dg)};
}

}  // namespace

std::vector<double> bleaney_bowers_residuals(const SusceptibilityDataset& data, double j_over_kb,
                                             double g) {
  if (!(g > 0.0)) throw ValidationError("g must be positive");
  const auto m = shapes(data, j_over_kb);
  std::vector<double> r(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    r[i] = g * g * m[i] - data.points[i].chi_emu_mol;
  }
  return r;
}

ResidualJacobian bleaney_bowers_jacobian(const SusceptibilityDataset& data, double j_over_kb,
                                         double g) {
  if (!(g > 0.0)) throw ValidationError("g must be positive");
  ResidualJacobian jac;
  jac.d_dj.resize(data.points.size());
  jac.d_dg.resize(data.points.size());
  const Coupling coupling(j_over_kb);
  for (std::size_t i = 0; i < data.points.size(); ++i) {
    const double t = data.points[i].temperature_k;
    const ThermalPoint pt{coupling, Temperature(t)};
    const double f = dimensionless_susceptibility(pt);
    const double p4 = singlet_population(pt);
    const double prefactor = 2.0 * constants::kMolarCurie * g * g / t;
    // dF/dJ = -F (1 - 3F) / T
    jac.d_dj[i] = -prefactor * f * p4 / t;
    jac.d_dg[i] = 2.0 * prefactor * f / g;
  }
  return jac;
}

FitResult fit_bleaney_bowers(const SusceptibilityDataset& data, GPolicy policy,
                             const FitOptions& opt) {
  validate_dataset(data);

  Problem prob{data, false, 0.0};
  double fallback_g = 0.0;
  if (const auto* fix = std::get_if<FixG>(&policy)) {
    if (!std::isfinite(fix->value) || !(fix->value > 0.0)) {
      throw ValidationError("fixed g must be positive");
    }
    prob.fixed_g = fix->value;
  } else {
    const auto& free = std::get<FreeG>(policy);
    if (!std::isfinite(free.initial) || !(free.initial > 0.0)) {
      throw ValidationError("initial g must be positive");
    }
    prob.free_g = true;
    fallback_g = free.initial;
  }
  if (opt.max_iterations < 0) throw ValidationError("max_iterations must be non-negative");

  const std::size_t np = prob.n_params();
  const std::size_t n = data.points.size();

  const Seed seed = scan_for_seed(prob, fallback_g, opt);

  double chi_norm = 0.0;
  for (const auto& pt : data.points) chi_norm += pt.chi_emu_mol * pt.chi_emu_mol;
  chi_norm = std::sqrt(chi_norm);

  // With g free, g^2 enters linearly, so it is profiled out: for every J the
  // best g^2 is a closed-form least-squares coefficient, and the damped
  // Gauss-Newton iteration runs on J alone with the total derivative
  // d r_i/dJ + d r_i/dg * dg*/dJ. This removes the long J-g valley that
  // makes plain two-parameter Gauss-Newton crawl on noisy data.
  auto project = [&](double j) -> std::optional<Params> {
    if (!std::isfinite(j) || std::abs(j) > constants::kDefaultCouplingCap) return std::nullopt;
    if (!prob.free_g) return Params{j, 0.0};
    const double g2 = profile_g_squared(data, shapes(data, j));
    if (!(g2 > 0.0) || !std::isfinite(g2)) return std::nullopt;
    return Params{j, std::sqrt(g2)};
  };

  // Everything the iteration needs at one parameter point.
  struct State {
    Params p;
    std::vector<double> residuals;
    double cost = 0.0;
    std::array<double, 2> grad{};    // J^T r over the active parameters
    std::array<double, 4> normal{};  // J^T J over the active parameters
    double gnorm = 0.0;              // max_k |J_k . r| / (|J_k| |r|)
    double j_grad = 0.0;             // d(cost/2)/dJ along the profile
    double j_curvature = 0.0;        // Gauss-Newton curvature along the profile
    double cost_rounding = 0.0;
  };
  auto evaluate = [&](const Params& at) {
    State st;
    st.p = at;
    const double g = prob.g_of(at);
    st.residuals = bleaney_bowers_residuals(data, at[0], g);
    st.cost = sum_squares(st.residuals);
    const auto jac = active_jacobian(prob, at);

    double dg_dj = 0.0;
    if (prob.free_g) {
      // g*^2 = A/B with A = sum chi m, B = sum m^2 and m = model / g^2
      double a_sum = 0.0, b_sum = 0.0, da = 0.0, db = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double chi = data.points[i].chi_emu_mol;
        const double m = (st.residuals[i] + chi) / (g * g);
        const double dm = jac[0][i] / (g * g);
        a_sum += chi * m;
        b_sum += m * m;
        da += chi * dm;
        db += 2.0 * m * dm;
      }
      const double dg2 = (da * b_sum - a_sum * db) / (b_sum * b_sum);
      dg_dj = dg2 / (2.0 * g);
    }

    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t a = 0; a < np; ++a) {
        st.grad[a] += jac[a][i] * st.residuals[i];
        for (std::size_t b = 0; b < np; ++b) st.normal[a * 2 + b] += jac[a][i] * jac[b][i];
      }
      const double total = jac[0][i] + (prob.free_g ? jac[1][i] * dg_dj : 0.0);
      st.j_grad += total * st.residuals[i];
      st.j_curvature += total * total;
      // each residual carries ~eps |chi_i| of rounding
      st.cost_rounding += 4.0 * std::numeric_limits<double>::epsilon() *
                          std::abs(st.residuals[i]) * data.points[i].chi_emu_mol;
    }
    const double rnorm = std::sqrt(st.cost);
    for (std::size_t a = 0; a < np; ++a) {
      const double col = std::sqrt(st.normal[a * 2 + a]);
      if (col > 0.0 && rnorm > 0.0) {
        st.gnorm = std::max(st.gnorm, std::abs(st.grad[a]) / (col * rnorm));
      }
    }
    return st;
  };

  const auto start = project(seed.j);
  State cur = evaluate(start.value_or(Params{seed.j, seed.g}));
  FitResult result;
  double lambda = opt.initial_damping;
  bool stalled = false;

  auto is_converged = [&] {
    return std::sqrt(cur.cost) <= opt.residual_tolerance * chi_norm ||
           cur.gnorm <= opt.gradient_tolerance;
  };
  auto raise_damping = [&] {
    lambda *= opt.damping_increase;
    stalled = lambda > 1e16;
  };

  // Secant curvature of the reduced cost from the last accepted step. With
  // large residuals the Gauss-Newton term alone can miss half the curvature,
  // and steps then overshoot back and forth across the minimum.
  double secant = 0.0;
  int iter = 0;
  while (iter < opt.max_iterations && !is_converged() && !stalled) {
    ++iter;
    // Marquardt-scaled step: (1 + lambda) c delta = -grad
    const double curvature = std::max(cur.j_curvature, secant);
    const double denom = curvature * (1.0 + lambda);
    if (!(denom > 0.0) || !std::isfinite(denom)) {
      raise_damping();
      continue;
    }
    const double delta = -cur.j_grad / denom;
    const auto trial = project(cur.p[0] + delta);
    if (!trial) {
      raise_damping();
      continue;
    }
    State next = evaluate(*trial);

    // Near the minimum the cost decrease of a good step (~ gnorm^2 cost) drops
    // below the rounding of the cost itself; there the gradient decides.
    const bool lower = next.cost < cur.cost;
    const bool level = std::abs(next.cost - cur.cost) <= cur.cost_rounding + next.cost_rounding;
    if (lower || (level && next.gnorm < cur.gnorm)) {
      // Gain ratio against the quadratic model. A step that lowers the cost
      // but falls well short of the model (typically an overshoot when the
      // residuals are noisy) is taken but counts as a failure for damping.
      const double predicted = -(2.0 * delta * cur.j_grad + delta * delta * curvature);
      const double gain = predicted > 0.0 ? (cur.cost - next.cost) / predicted : 0.0;
      const bool tiny_step =
          std::abs(delta) <= opt.step_tolerance * (std::abs(cur.p[0]) + opt.step_tolerance);
      const double s_new = (next.j_grad - cur.j_grad) / delta;
      secant = std::isfinite(s_new) && s_new > 0.0 ? s_new : 0.0;
      cur = std::move(next);
      if (gain > 0.25 || level) {
        lambda /= opt.damping_decrease;
      } else {
        lambda *= opt.damping_increase;
      }
      if (tiny_step) break;
    } else {
      raise_damping();
    }
  }

  const Params& p = cur.p;
  const double cost = cur.cost;
  const double gnorm = cur.gnorm;
  const auto& normal = cur.normal;
  result.j_over_kb = p[0];
  result.g = prob.g_of(p);
  result.residual_rms = std::sqrt(cost / static_cast<double>(n));
  result.iterations = iter;
  result.gradient_norm = gnorm;
  result.converged = std::isfinite(result.residual_rms) && is_converged();

  // Covariance sigma^2 (J^T J)^{-1}, sigma^2 from the residual variance.
  const double dof = static_cast<double>(n) - static_cast<double>(np);
  const double sigma2 = dof > 0.0 ? cost / dof : std::numeric_limits<double>::quiet_NaN();
  if (np == 1) {
    result.covariance_diag = {normal[0] > 0.0 ? sigma2 / normal[0]
                                              : std::numeric_limits<double>::infinity()};
  } else {
    const double det = normal[0] * normal[3] - normal[1] * normal[2];
    if (det > 0.0) {
      result.covariance_diag = {sigma2 * normal[3] / det, sigma2 * normal[0] / det};
    } else {
      const double inf = std::numeric_limits<double>::infinity();
      result.covariance_diag = {inf, inf};
    }
  }

  std::ostringstream diag;
  if (result.converged) {
    diag << "converged";
  } else if (stalled) {
    diag << "damping exceeded 1e16 without reducing the cost";
  } else if (iter >= opt.max_iterations) {
    diag << "no convergence after " << opt.max_iterations << " iterations";
  } else {
    diag << "step size fell below tolerance before the gradient criterion was met";
  }
  diag << " (scaled gradient " << gnorm << ")";
  result.diagnostic = diag.str();
  return result;
}

}  // namespace spin_stirling
