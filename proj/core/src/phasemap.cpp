#include "spin_stirling/phasemap.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <thread>

#include "json.hpp"
#include "spin_stirling/error.hpp"

namespace spin_stirling {

namespace {

constexpr std::string_view kCsvHeader =
    "coupling_ratio,temp_ratio,mode,work,q_in,q_out,eta_over_carnot";
constexpr std::string_view kInvalidToken = "invalid";

void require_strictly_increasing(const std::vector<double>& axis, const char* name) {
  if (axis.empty()) {
    throw ValidationError(std::string(name) + " axis is empty");
  }
  for (std::size_t i = 0; i < axis.size(); ++i) {
    if (!std::isfinite(axis[i])) {
      throw ValidationError(std::string(name) + " axis contains a non-finite value");
    }
    if (i > 0 && !(axis[i] > axis[i - 1])) {
      throw ValidationError(std::string(name) + " axis must be strictly increasing");
    }
  }
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double sign_of(Branch b) { return b == Branch::BPositive ? 1.0 : -1.0; }

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double_field(std::string_view field, std::size_t line_no) {
  double v = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw DataError("cannot parse number '" + std::string(field) + "'", line_no);
  }
  return v;
}

}  // namespace

std::string_view to_token(Branch branch) noexcept {
  return branch == Branch::BPositive ? "b-positive" : "b-negative";
}

std::optional<Branch> branch_from_token(std::string_view token) noexcept {
  if (token == "b-positive") return Branch::BPositive;
  if (token == "b-negative") return Branch::BNegative;
  return std::nullopt;
}

SweepGrid::SweepGrid(std::vector<double> coupling_ratio_axis, std::vector<double> temp_ratio_axis,
                     SweepAnchor anchor, Branch branch)
    : coupling_axis_(std::move(coupling_ratio_axis)),
      temp_axis_(std::move(temp_ratio_axis)),
      anchor_(anchor),
      branch_(branch) {
  require_strictly_increasing(coupling_axis_, "coupling ratio");
  require_strictly_increasing(temp_axis_, "temperature ratio");
  if (!(temp_axis_.front() > 1.0)) {
    throw ValidationError("temperature ratios must all exceed 1");
  }
  if (anchor_.j_b.kelvin() == 0.0) {
    throw ValidationError("anchor |J_B| must be non-zero");
  }
}

SweepGrid SweepGrid::uniform(double ratio_min, double ratio_max, std::size_t coupling_steps,
                             double temp_ratio_max, std::size_t temp_steps, SweepAnchor anchor,
                             Branch branch) {
  if (coupling_steps == 0 || temp_steps == 0) {
    throw ValidationError("grid needs at least one step on each axis");
  }
  if (coupling_steps > 1 && !(ratio_max > ratio_min)) {
    throw ValidationError("ratio_max must exceed ratio_min");
  }
  if (!(temp_ratio_max > 1.0)) {
    throw ValidationError("temp_ratio_max must exceed 1");
  }
  std::vector<double> couplings(coupling_steps);
  for (std::size_t i = 0; i < coupling_steps; ++i) {
    couplings[i] = coupling_steps == 1
                       ? ratio_min
                       : ratio_min + (ratio_max - ratio_min) * static_cast<double>(i) /
                                         static_cast<double>(coupling_steps - 1);
  }
  std::vector<double> temps(temp_steps);
  for (std::size_t k = 0; k < temp_steps; ++k) {
    temps[k] = 1.0 + (temp_ratio_max - 1.0) * static_cast<double>(k + 1) /
                         static_cast<double>(temp_steps);
  }
  return SweepGrid(std::move(couplings), std::move(temps), anchor, branch);
}

SweepGrid SweepGrid::default_grid(Branch branch) {
  return uniform(-3.0, 3.0, 400, 3.0, 400, SweepAnchor{Coupling(32.0), Temperature(20.0)},
                 branch);
}

Coupling SweepGrid::j_b() const {
  return Coupling(sign_of(branch_) * std::abs(anchor_.j_b.kelvin()));
}

CycleSpec SweepGrid::spec_at(double coupling_ratio, double temp_ratio) const {
  const Coupling jb = j_b();
  const double tc = anchor_.t_cold.kelvin();
  return CycleSpec(Coupling(coupling_ratio * jb.kelvin()), jb, Temperature(temp_ratio * tc),
                   anchor_.t_cold);
}

ModeCell evaluate_cell(const SweepGrid& grid, double coupling_ratio, double temp_ratio) {
  ModeCell cell;
  cell.coupling_ratio = coupling_ratio;
  cell.temp_ratio = temp_ratio;
  try {
    const CycleSpec spec = grid.spec_at(coupling_ratio, temp_ratio);
    const StrokeLedger l = assemble_ledger(spec);
    cell.mode = classify_mode(l);
    cell.work = l.work;
    cell.q_in = l.q_in;
    cell.q_out = l.q_out;
    if (cell.mode == OperationMode::HeatEngine) {
      cell.eta_over_carnot =
          (l.work / l.q_in) / carnot_efficiency(spec.t_hot(), spec.t_cold());
    }
  } catch (const Error& e) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    cell.mode.reset();
    cell.work = cell.q_in = cell.q_out = nan;
    cell.eta_over_carnot.reset();
    cell.diagnostic = e.what();
  }
  return cell;
}

std::vector<ModeCell> sweep(const SweepGrid& grid, SweepOptions options) {
  const auto& rs = grid.coupling_ratio_axis();
  const auto& ts = grid.temp_ratio_axis();
  std::vector<ModeCell> cells(rs.size() * ts.size());

  auto do_row = [&](std::size_t row) {
    for (std::size_t col = 0; col < rs.size(); ++col) {
      cells[row * rs.size() + col] = evaluate_cell(grid, rs[col], ts[row]);
    }
  };

  unsigned threads = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
  threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(ts.size()));
  if (threads == 1) {
    for (std::size_t row = 0; row < ts.size(); ++row) do_row(row);
    return cells;
  }

  // Rows are striped across workers; each cell is written exactly once.
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t row = w; row < ts.size(); row += threads) do_row(row);
    });
  }
  workers.clear();
  return cells;
}

std::vector<double> trace_zero_work_boundary(const SweepGrid& grid, double temp_ratio) {
  if (!(temp_ratio > 1.0) || !std::isfinite(temp_ratio)) {
    throw ValidationError("temp_ratio must exceed 1");
  }
  const double jb = grid.j_b().kelvin();
  const Temperature tc = grid.t_cold();
  const Temperature th(temp_ratio * tc.kelvin());
  auto work_at = [&](double r) {
    return limits::total_work(Coupling(r * jb), Coupling(jb), th, tc);
  };

  const auto& axis = grid.coupling_ratio_axis();
  std::vector<double> roots;
  auto keep = [&](double r, double width) {
    // Sign changes across J_A = J_B are the degenerate zero-width line.
    if (std::abs(r - 1.0) <= std::max(width, 4 * std::numeric_limits<double>::epsilon())) return;
    roots.push_back(r);
  };

  double prev_r = axis.front();
  double prev_w = work_at(prev_r);
  if (prev_w == 0.0) keep(prev_r, 0.0);
  for (std::size_t i = 1; i < axis.size(); ++i) {
    const double r = axis[i];
    const double w = work_at(r);
    if (w == 0.0) {
      keep(r, 0.0);
    } else if (prev_w != 0.0 && std::signbit(w) != std::signbit(prev_w)) {
      double lo = prev_r;
      double hi = r;
      double w_lo = prev_w;
      for (int it = 0; it < 400; ++it) {
        const double width = hi - lo;
        if (width <= 1e-10 * std::max(std::abs(lo), std::abs(hi))) break;
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double w_mid = work_at(mid);
        if (w_mid == 0.0) {
          lo = hi = mid;
          break;
        }
        if (std::signbit(w_mid) == std::signbit(w_lo)) {
          lo = mid;
          w_lo = w_mid;
        } else {
          hi = mid;
        }
      }
      keep(0.5 * (lo + hi), hi - lo);
    }
    prev_r = r;
    prev_w = w;
  }
  return roots;
}

std::string export_cells(std::span<const ModeCell> cells, ExportFormat format) {
  if (cells.empty()) {
    throw ValidationError("nothing to export: cell list is empty");
  }
  if (format == ExportFormat::Csv) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& c : cells) {
      out += format_double(c.coupling_ratio);
      out += ',';
      out += format_double(c.temp_ratio);
      out += ',';
      out += c.mode ? to_token(*c.mode) : kInvalidToken;
      out += ',';
      out += format_double(c.work);
      out += ',';
      out += format_double(c.q_in);
      out += ',';
      out += format_double(c.q_out);
      out += ',';
      if (c.eta_over_carnot) out += format_double(*c.eta_over_carnot);
      out += '\n';
    }
    return out;
  }

  auto number = [](double v) -> nlohmann::ordered_json {
    if (std::isnan(v)) return nullptr;
    return v;
  };
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& c : cells) {
    nlohmann::ordered_json o;
    o["coupling_ratio"] = c.coupling_ratio;
    o["temp_ratio"] = c.temp_ratio;
    o["mode"] = std::string(c.mode ? to_token(*c.mode) : kInvalidToken);
    o["work"] = number(c.work);
    o["q_in"] = number(c.q_in);
    o["q_out"] = number(c.q_out);
    o["eta_over_carnot"] =
        c.eta_over_carnot ? nlohmann::ordered_json(*c.eta_over_carnot) : nullptr;
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + "\n";
}

void export_cells_to_file(std::span<const ModeCell> cells, ExportFormat format,
                          const std::filesystem::path& path) {
  const std::string text = export_cells(cells, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) {
    throw IoError("write to '" + path.string() + "' failed");
  }
}

std::vector<ModeCell> parse_cells_csv(std::string_view text) {
  std::vector<ModeCell> cells;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool saw_header = false;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != kCsvHeader) throw DataError("unexpected header", line_no);
      saw_header = true;
      continue;
    }
    const auto fields = split_commas(line);
    if (fields.size() != 7) {
      throw DataError("expected 7 fields, got " + std::to_string(fields.size()), line_no);
    }
    ModeCell c;
    c.coupling_ratio = parse_double_field(fields[0], line_no);
    c.temp_ratio = parse_double_field(fields[1], line_no);
    if (fields[2] != kInvalidToken) {
      c.mode = mode_from_token(fields[2]);
      if (!c.mode) throw DataError("unknown mode '" + std::string(fields[2]) + "'", line_no);
    }
    c.work = parse_double_field(fields[3], line_no);
    c.q_in = parse_double_field(fields[4], line_no);
    c.q_out = parse_double_field(fields[5], line_no);
    if (!fields[6].empty()) c.eta_over_carnot = parse_double_field(fields[6], line_no);
    cells.push_back(std::move(c));
  }
  if (!saw_header) throw DataError("missing header");
  return cells;
}

}  // namespace spin_stirling
