#pragma once

// Quasi-static Stirling cycle driven by the exchange coupling:
//
//   A (J_A, T_h) --isothermal expansion--> B (J_B, T_h)
//   B            --isochoric cooling-----> C (J_B, T_c)
//   C            --isothermal compression-> D (J_A, T_c)
//   D            --isochoric heating-----> A
//
// Sign conventions: Q > 0 is heat absorbed by the working substance and
// W > 0 is work done by it, so W = Q_AB + Q_BC + Q_CD + Q_DA over a cycle.
// All energies are in kelvin (energy / k_B).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spin_stirling/units.hpp"

namespace spin_stirling {

class CycleSpec {
 public:
  /// Throws ValidationError unless t_hot > t_cold and j_a != j_b.
  CycleSpec(Coupling j_a, Coupling j_b, Temperature t_hot, Temperature t_cold);

  Coupling j_a() const noexcept { return j_a_; }
  Coupling j_b() const noexcept { return j_b_; }
  Temperature t_hot() const noexcept { return t_hot_; }
  Temperature t_cold() const noexcept { return t_cold_; }

 private:
  Coupling j_a_;
  Coupling j_b_;
  Temperature t_hot_;
  Temperature t_cold_;
};

struct StrokeLedger {
  double q_ab = 0.0;
  double q_bc = 0.0;
  double q_cd = 0.0;
  double q_da = 0.0;
  double work = 0.0;
  double q_in = 0.0;   // q_ab + q_da
  double q_out = 0.0;  // q_bc + q_cd, signed

  double max_stroke_magnitude() const noexcept;
};

enum class OperationMode {
  HeatEngine,
  Refrigerator,
  Accelerator,
  Heater,
  CarnotDegenerate,
  Forbidden,
};

/// Lowercase export token: heat_engine, refrigerator, accelerator, heater,
/// carnot, forbidden.
std::string_view to_token(OperationMode mode) noexcept;
std::optional<OperationMode> mode_from_token(std::string_view token) noexcept;

double heat_isothermal_expansion(const CycleSpec& spec);
double heat_isochoric_cooling(const CycleSpec& spec);
double heat_isothermal_compression(const CycleSpec& spec);
double heat_isochoric_heating(const CycleSpec& spec);

/// Net work from the closed-form log expression (not from summing strokes).
double total_work(const CycleSpec& spec);

StrokeLedger assemble_ledger(const CycleSpec& spec);

/// 1e-12 * max(|q_ab|, |q_bc|, |q_cd|, |q_da|, 1e-30).
double default_mode_tolerance(const StrokeLedger& ledger) noexcept;

/// Sign pattern of (W, Q_in, Q_out) mapped onto the operation modes allowed
/// by the second law. Values with |v| <= tolerance count as zero; all three
/// zero is CarnotDegenerate, any unlisted pattern is Forbidden.
OperationMode classify_mode(const StrokeLedger& ledger, double tolerance);
OperationMode classify_mode(const StrokeLedger& ledger);

/// W / Q_in. Throws ModeError when the cycle is not a heat engine.
double efficiency(const CycleSpec& spec);

/// The efficiency written out in terms of F and S, evaluated independently of
/// the ledger. Used as a cross-check of `efficiency`; no mode check.
double efficiency_expanded(const CycleSpec& spec);

/// 1 - T_c / T_h. Throws ValidationError when t_hot < t_cold.
double carnot_efficiency(Temperature t_hot, Temperature t_cold);

/// One message per stroke endpoint with k_B T > |J|, i.e. closer to the
/// paramagnetic regime than the model is meant for. Empty when all is well.
std::vector<std::string> regime_warnings(const CycleSpec& spec);

namespace limits {

/// Same accounting as assemble_ledger but accepts t_hot == t_cold and
/// j_a == j_b, for probing Carnot points. Still requires t_hot >= t_cold.
StrokeLedger ledger(Coupling j_a, Coupling j_b, Temperature t_hot, Temperature t_cold);

/// Closed-form net work with the relaxed preconditions of `ledger`.
double total_work(Coupling j_a, Coupling j_b, Temperature t_hot, Temperature t_cold);

}  // namespace limits

}  // namespace spin_stirling
