#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spin_stirling/cycle.hpp"
#include "spin_stirling/units.hpp"

namespace spin_stirling {

struct SusceptibilityPoint {
  double temperature_k = 0.0;
  double chi_emu_mol = 0.0;
};

/// Experimental chi(T) series. After ingestion: at least kMinPoints points,
/// temperatures strictly increasing and positive, chi positive.
struct SusceptibilityDataset {
  static constexpr std::size_t kMinPoints = 5;

  std::vector<SusceptibilityPoint> points;
  std::optional<double> pressure_gpa;
  std::string label;
  /// Every `# key: value` comment line, including pressure_GPa and label.
  std::map<std::string, std::string> metadata;
};

/// Throws DataError if `data` breaks any dataset invariant.
void validate_dataset(const SusceptibilityDataset& data);

/// Parses CSV with a `T_K,chi_emu_mol` header (column order free, extra
/// columns ignored) and optional `# key: value` comment lines. Recognised
/// keys: pressure_GPa, label. Rows are sorted by temperature. Errors carry
/// the 1-based line number where one applies.
SusceptibilityDataset ingest_csv(std::string_view text);
SusceptibilityDataset ingest_csv_file(const std::filesystem::path& path);

/// Metal-oxygen-metal bridging angle in degrees, checked against a sanity
/// window (default 80..120, exclusive).
class BridgingAngle {
 public:
  explicit BridgingAngle(double degrees, double window_lo = 80.0, double window_hi = 120.0);
  double degrees() const noexcept { return degrees_; }

 private:
  double degrees_;
};

/// Empirical magneto-structural line for hydroxo-bridged Cu(II) dimers:
/// J/k_B = 106 theta - 10387 K, theta in degrees. Its root is at
/// 10387/106 = 97.99 degrees.
Coupling coupling_from_angle(BridgingAngle angle);

struct EngineCurvePoint {
  double t_hot_k = 0.0;
  StrokeLedger ledger;
  OperationMode mode = OperationMode::Forbidden;
  std::optional<double> eta;  // only in heat-engine mode
  double eta_carnot = 0.0;
};

/// Cycle between j_a and j_b with a fixed cold bath, one entry per t_hot.
/// Throws ValidationError if any t_hot <= t_cold.
std::vector<EngineCurvePoint> engine_curve(Coupling j_a, Coupling j_b, Temperature t_cold,
                                           std::span<const double> t_hot_axis);

/// Header `T_h_K,Q_AB_eV,Q_BC_eV,Q_CD_eV,Q_DA_eV,W_eV,eta,eta_carnot,mode`;
/// eta is empty outside heat-engine mode.
std::string engine_curve_csv(std::span<const EngineCurvePoint> curve);

}  // namespace spin_stirling
