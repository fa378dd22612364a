#include "spin_stirling/cycle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "spin_stirling/dimer.hpp"
#include "spin_stirling/error.hpp"

namespace spin_stirling {

namespace {

struct Corners {
  Coupling j_a;
  Coupling j_b;
  Temperature t_hot;
  Temperature t_cold;
};

Corners relaxed_corners(Coupling j_a, Coupling j_b, Temperature t_hot, Temperature t_cold) {
  if (t_hot < t_cold) {
    throw ValidationError("t_hot must not be below t_cold");
  }
  return {j_a, j_b, t_hot, t_cold};
}

Corners corners_of(const CycleSpec& spec) {
  return {spec.j_a(), spec.j_b(), spec.t_hot(), spec.t_cold()};
}

// Each state function is written as a reference constant plus a remainder,
// referred either to the paramagnetic limit (all four states equally
// populated) or to the ground multiplet, whichever leaves the smaller
// remainder. Differences of remainders keep their relative precision at
// both temperature extremes; the constants cancel analytically or are
// combined exactly.
struct Split {
  double constant;
  double rest;
};

Split entropy_split(Coupling j, Temperature t) {
  const ThermalPoint p{j, t};
  const Split paramagnetic{std::log(4.0), -entropy_deficit(p)};
  const Split ground{std::log(ground_multiplet(j).degeneracy),
                     log_partition_above_ground(p) + excitation_energy(p) / t.kelvin()};
  return std::abs(ground.rest) < std::abs(paramagnetic.rest) ? ground : paramagnetic;
}

double entropy_change(Coupling from, Coupling to, Temperature t) {
  const Split a = entropy_split(from, t);
  const Split b = entropy_split(to, t);
  return (b.rest - a.rest) + (b.constant - a.constant);
}

// U(j, to) - U(j, from); the ground energy cancels exactly.
double energy_change(Coupling j, Temperature from, Temperature to) {
  const ThermalPoint p{j, from};
  const ThermalPoint q{j, to};
  const double u_p = internal_energy(p);
  const double u_q = internal_energy(q);
  const double e_p = excitation_energy(p);
  const double e_q = excitation_energy(q);
  if (std::max(std::abs(e_p), std::abs(e_q)) < std::max(std::abs(u_p), std::abs(u_q))) {
    return e_q - e_p;
  }
  return u_q - u_p;
}

// ln Z(j, t) = -E_ref / t + constant + rest(t). One reference per coupling
// across both temperatures so that the E_ref terms cancel around the cycle.
struct LogZSplit {
  double constant;
  double rest_hot;
  double rest_cold;
};

LogZSplit log_z_split(Coupling j, Temperature hot, Temperature cold) {
  const ThermalPoint h{j, hot};
  const ThermalPoint c{j, cold};
  const LogZSplit paramagnetic{std::log(4.0), log_partition_excess(h), log_partition_excess(c)};
  const LogZSplit ground{std::log(ground_multiplet(j).degeneracy), log_partition_above_ground(h),
                         log_partition_above_ground(c)};
  auto size = [&](const LogZSplit& s) {
    return std::max(hot.kelvin() * std::abs(s.rest_hot), cold.kelvin() * std::abs(s.rest_cold));
  };
  return size(ground) < size(paramagnetic) ? ground : paramagnetic;
}

double q_ab(const Corners& c) {
  return c.t_hot.kelvin() * entropy_change(c.j_a, c.j_b, c.t_hot);
}

double q_bc(const Corners& c) { return energy_change(c.j_b, c.t_hot, c.t_cold); }

double q_cd(const Corners& c) {
  return c.t_cold.kelvin() * entropy_change(c.j_b, c.j_a, c.t_cold);
}

double q_da(const Corners& c) { return energy_change(c.j_a, c.t_cold, c.t_hot); }

// T_h ln[e^{(J_A-J_B)/4T_h} F(J_A,T_h)/F(J_B,T_h)]
//   + T_c ln[e^{(J_B-J_A)/4T_c} F(J_B,T_c)/F(J_A,T_c)]
// Since ln F = -ln Z - x/4 this is T_h(ln Z_B - ln Z_A)|_h + T_c(ln Z_A - ln Z_B)|_c.
// The reference energies drop out, leaving remainders plus
// (T_h - T_c)(constant_B - constant_A).
double work_closed_form(const Corners& c) {
  const LogZSplit a = log_z_split(c.j_a, c.t_hot, c.t_cold);
  const LogZSplit b = log_z_split(c.j_b, c.t_hot, c.t_cold);
  const double th = c.t_hot.kelvin();
  const double tc = c.t_cold.kelvin();
  return th * (b.rest_hot - a.rest_hot) + tc * (a.rest_cold - b.rest_cold) +
         (th - tc) * (b.constant - a.constant);
}

double f_at(Coupling j, Temperature t) { return dimensionless_susceptibility(ThermalPoint{j, t}); }

StrokeLedger ledger_of(const Corners& c) {
  StrokeLedger l;
  l.q_ab = q_ab(c);
  l.q_bc = q_bc(c);
  l.q_cd = q_cd(c);
  l.q_da = q_da(c);
  l.work = work_closed_form(c);
  l.q_in = l.q_ab + l.q_da;
  l.q_out = l.q_bc + l.q_cd;
  return l;
}

// Loose internal consistency check; the tight bounds live in the tests.
void check_ledger(const StrokeLedger& l) {
  const double scale = std::max(l.max_stroke_magnitude(), 1e-300);
  const double closure = std::abs(l.work - (l.q_in + l.q_out));
  const double slack = 1e-12 * scale;
  if (!(closure <= 1e-8 * scale) || l.q_bc > slack || l.q_da < -slack) {
    std::ostringstream msg;
    msg << "stroke ledger violates first law or isochoric signs: q_bc=" << l.q_bc
        << " q_da=" << l.q_da << " closure=" << closure;
    throw Error(msg.str());
  }
}

}  // namespace

CycleSpec::CycleSpec(Coupling j_a, Coupling j_b, Temperature t_hot, Temperature t_cold)
    : j_a_(j_a), j_b_(j_b), t_hot_(t_hot), t_cold_(t_cold) {
  if (!(t_hot.kelvin() > t_cold.kelvin())) {
    throw ValidationError("t_hot must exceed t_cold");
  }
  if (j_a == j_b) {
    throw ValidationError("j_a and j_b must differ (zero-width cycle)");
  }
}

double StrokeLedger::max_stroke_magnitude() const noexcept {
  return std::max({std::abs(q_ab), std::abs(q_bc), std::abs(q_cd), std::abs(q_da)});
}

std::string_view to_token(OperationMode mode) noexcept {
  switch (mode) {
    case OperationMode::HeatEngine:
      return "heat_engine";
    case OperationMode::Refrigerator:
      return "refrigerator";
    case OperationMode::Accelerator:
      return "accelerator";
    case OperationMode::Heater:
      return "heater";
    case OperationMode::CarnotDegenerate:
      return "carnot";
    case OperationMode::Forbidden:
      return "forbidden";
  }
  return "forbidden";
}

std::optional<OperationMode> mode_from_token(std::string_view token) noexcept {
  for (auto m : {OperationMode::HeatEngine, OperationMode::Refrigerator,
                 OperationMode::Accelerator, OperationMode::Heater,
                 OperationMode::CarnotDegenerate, OperationMode::Forbidden}) {
    if (to_token(m) == token) {
      return m;
    }
  }
  return std::nullopt;
}

double heat_isothermal_expansion(const CycleSpec& spec) { return q_ab(corners_of(spec)); }
double heat_isochoric_cooling(const CycleSpec& spec) { return q_bc(corners_of(spec)); }
double heat_isothermal_compression(const CycleSpec& spec) { return q_cd(corners_of(spec)); }
double heat_isochoric_heating(const CycleSpec& spec) { return q_da(corners_of(spec)); }

double total_work(const CycleSpec& spec) { return work_closed_form(corners_of(spec)); }

StrokeLedger assemble_ledger(const CycleSpec& spec) {
  StrokeLedger l = ledger_of(corners_of(spec));
  check_ledger(l);
  return l;
}

double default_mode_tolerance(const StrokeLedger& ledger) noexcept {
  return 1e-12 * std::max(ledger.max_stroke_magnitude(), 1e-30);
}

OperationMode classify_mode(const StrokeLedger& ledger, double tolerance) {
  if (!(tolerance >= 0.0)) {
    throw ValidationError("classification tolerance must be non-negative");
  }
  // -1, 0, +1
  auto sign = [tolerance](double v) { return std::abs(v) <= tolerance ? 0 : (v > 0.0 ? 1 : -1); };
  const int w = sign(ledger.work);
  const int in = sign(ledger.q_in);
  const int out = sign(ledger.q_out);

  if (w == 0 && in == 0 && out == 0) return OperationMode::CarnotDegenerate;
  if (w == 1 && in == 1 && out == -1) return OperationMode::HeatEngine;
  if (w == -1 && in == -1 && out == 1) return OperationMode::Refrigerator;
  if (w == -1 && in == 1 && out == -1) return OperationMode::Accelerator;
  if (w == -1 && in == -1 && out == -1) return OperationMode::Heater;
  return OperationMode::Forbidden;
}

OperationMode classify_mode(const StrokeLedger& ledger) {
  return classify_mode(ledger, default_mode_tolerance(ledger));
}

double efficiency(const CycleSpec& spec) {
  const StrokeLedger l = assemble_ledger(spec);
  const OperationMode mode = classify_mode(l);
  if (mode != OperationMode::HeatEngine) {
    throw ModeError("efficiency is only defined in heat-engine mode, cycle is " +
                    std::string(to_token(mode)));
  }
  return l.work / l.q_in;
}

double efficiency_expanded(const CycleSpec& spec) {
  const Corners c = corners_of(spec);
  const double th = c.t_hot.kelvin();
  const double ja = c.j_a.kelvin();
  const double numerator = work_closed_form(c) / th;
  const double denominator = entropy_change(c.j_a, c.j_b, c.t_hot) +
                             3.0 * ja / th * (f_at(c.j_a, c.t_hot) - f_at(c.j_a, c.t_cold));
  return numerator / denominator;
}

double carnot_efficiency(Temperature t_hot, Temperature t_cold) {
  if (t_hot < t_cold) {
    throw ValidationError("t_hot must not be below t_cold");
  }
  return 1.0 - t_cold.kelvin() / t_hot.kelvin();
}

std::vector<std::string> regime_warnings(const CycleSpec& spec) {
  std::vector<std::string> out;
  const std::array<std::pair<Coupling, Temperature>, 4> endpoints{{
      {spec.j_a(), spec.t_hot()},
      {spec.j_b(), spec.t_hot()},
      {spec.j_b(), spec.t_cold()},
      {spec.j_a(), spec.t_cold()},
  }};
  const char* names[] = {"A", "B", "C", "D"};
  for (std::size_t i = 0; i < endpoints.size(); ++i) {
    const auto& [j, t] = endpoints[i];
    if (t.kelvin() > std::abs(j.kelvin())) {
      std::ostringstream msg;
      msg << "point " << names[i] << ": k_B T = " << t.kelvin() << " K exceeds |J|/k_B = "
          << std::abs(j.kelvin()) << " K (approaching the paramagnetic regime)";
      out.push_back(msg.str());
    }
  }
  return out;
}

namespace limits {

StrokeLedger ledger(Coupling j_a, Coupling j_b, Temperature t_hot, Temperature t_cold) {
  return ledger_of(relaxed_corners(j_a, j_b, t_hot, t_cold));
}

double total_work(Coupling j_a, Coupling j_b, Temperature t_hot, Temperature t_cold) {
  return work_closed_form(relaxed_corners(j_a, j_b, t_hot, t_cold));
}

}  // namespace limits

}  // namespace spin_stirling
