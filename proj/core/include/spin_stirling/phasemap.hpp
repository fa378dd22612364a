#pragma once

// Operation-mode maps over the (J_A/J_B, T_h/T_c) plane.
//
// The thermodynamics depends on J/T, not on the two ratios alone, so a grid
// is pinned to absolute scales by an anchor (|J_B|, T_c). The sign of J_B is
// chosen by the branch: B-negative and B-positive maps are separate panels.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spin_stirling/cycle.hpp"
#include "spin_stirling/units.hpp"

namespace spin_stirling {

enum class Branch { BPositive, BNegative };

std::string_view to_token(Branch branch) noexcept;  // "b-positive" / "b-negative"
std::optional<Branch> branch_from_token(std::string_view token) noexcept;

struct SweepAnchor {
  Coupling j_b{-32.0};          // only |j_b| is used; the branch sets the sign
  Temperature t_cold{20.0};
};

class SweepGrid {
 public:
  /// Throws ValidationError when an axis is empty or not strictly increasing,
  /// a temperature ratio is <= 1, or |j_b| is zero.
  SweepGrid(std::vector<double> coupling_ratio_axis, std::vector<double> temp_ratio_axis,
            SweepAnchor anchor, Branch branch);

  /// `coupling_steps` points evenly spaced on [ratio_min, ratio_max] (just
  /// ratio_min when 1), and `temp_steps` points 1 + (temp_max - 1) k / n for
  /// k = 1..n, so T_h/T_c = 1 itself is never on the grid.
  static SweepGrid uniform(double ratio_min, double ratio_max, std::size_t coupling_steps,
                           double temp_ratio_max, std::size_t temp_steps, SweepAnchor anchor,
                           Branch branch);

  /// 400 x 400 over J_A/J_B in [-3, 3], T_h/T_c in (1, 3], anchor (32 K, 20 K).
  static SweepGrid default_grid(Branch branch = Branch::BNegative);

  const std::vector<double>& coupling_ratio_axis() const noexcept { return coupling_axis_; }
  const std::vector<double>& temp_ratio_axis() const noexcept { return temp_axis_; }
  const SweepAnchor& anchor() const noexcept { return anchor_; }
  Branch branch() const noexcept { return branch_; }

  /// Signed J_B for this branch.
  Coupling j_b() const;
  Temperature t_cold() const noexcept { return anchor_.t_cold; }

  /// Builds the cycle at one grid point; throws like CycleSpec does.
  CycleSpec spec_at(double coupling_ratio, double temp_ratio) const;

 private:
  std::vector<double> coupling_axis_;
  std::vector<double> temp_axis_;
  SweepAnchor anchor_;
  Branch branch_;
};

struct ModeCell {
  double coupling_ratio = 0.0;
  double temp_ratio = 0.0;
  /// Empty when the cell could not be evaluated (see `diagnostic`).
  std::optional<OperationMode> mode;
  double work = 0.0;
  double q_in = 0.0;
  double q_out = 0.0;
  /// Present exactly when mode is HeatEngine.
  std::optional<double> eta_over_carnot;
  std::string diagnostic;

  bool flagged() const noexcept { return !mode.has_value(); }
};

struct SweepOptions {
  unsigned threads = 1;  // 0 picks std::thread::hardware_concurrency()
};

/// One cell per (temp ratio, coupling ratio) pair in row-major order with the
/// temperature ratio as the outer index. A cell that fails to evaluate is
/// flagged and the sweep carries on. Output does not depend on `threads`.
std::vector<ModeCell> sweep(const SweepGrid& grid, SweepOptions options = {});

ModeCell evaluate_cell(const SweepGrid& grid, double coupling_ratio, double temp_ratio);

/// Coupling ratios where W changes sign along the grid's coupling axis at a
/// fixed temperature ratio, each refined by bisection to a bracket of relative
/// width 1e-10. The degenerate line J_A = J_B, where W vanishes identically,
/// is not reported. Empty when W keeps one sign. Throws ValidationError unless
/// temp_ratio > 1.
std::vector<double> trace_zero_work_boundary(const SweepGrid& grid, double temp_ratio);

enum class ExportFormat { Csv, Json };

/// CSV: header `coupling_ratio,temp_ratio,mode,work,q_in,q_out,eta_over_carnot`
/// then one row per cell, floats with 17 significant digits, empty
/// eta_over_carnot when absent, mode `invalid` and `nan` values for flagged
/// cells. JSON: an array of objects with the same field names (null for
/// absent/NaN). Throws ValidationError on an empty cell list.
std::string export_cells(std::span<const ModeCell> cells, ExportFormat format);

/// Writes export_cells(...) to `path`; IoError names the path on failure.
void export_cells_to_file(std::span<const ModeCell> cells, ExportFormat format,
                          const std::filesystem::path& path);

/// Reads the CSV produced by export_cells. Throws DataError with a line number.
std::vector<ModeCell> parse_cells_csv(std::string_view text);

}  // namespace spin_stirling
