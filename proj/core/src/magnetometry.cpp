#include "spin_stirling/magnetometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "spin_stirling/error.hpp"

namespace spin_stirling {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void validate_dataset(const SusceptibilityDataset& data) {
  if (data.points.size() < SusceptibilityDataset::kMinPoints) {
    throw DataError("dataset too small: " + std::to_string(data.points.size()) +
                    " points, need at least " +
                    std::to_string(SusceptibilityDataset::kMinPoints));
  }
  for (std::size_t i = 0; i < data.points.size(); ++i) {
    const auto& p = data.points[i];
    if (!std::isfinite(p.temperature_k) || !(p.temperature_k > 0.0)) {
      throw DataError("temperature must be positive and finite");
    }
    if (!std::isfinite(p.chi_emu_mol) || !(p.chi_emu_mol > 0.0)) {
      throw DataError("susceptibility must be positive and finite");
    }
    if (i > 0 && !(p.temperature_k > data.points[i - 1].temperature_k)) {
      throw DataError("temperatures must be strictly increasing");
    }
  }
}

SusceptibilityDataset ingest_csv(std::string_view text) {
  SusceptibilityDataset data;
  // line number kept alongside each point so the duplicate check can name it
  std::vector<std::pair<SusceptibilityPoint, std::size_t>> rows;
  std::optional<std::size_t> t_col;
  std::optional<std::size_t> chi_col;
  std::size_t n_cols = 0;

  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;

    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto body = trim(line.substr(1));
      const auto colon = body.find(':');
      if (colon == std::string_view::npos) continue;
      const std::string key(trim(body.substr(0, colon)));
      const std::string value(trim(body.substr(colon + 1)));
      if (key.empty()) continue;
      data.metadata[key] = value;
      if (key == "pressure_GPa") {
        const auto v = to_double(value);
        if (!v || !std::isfinite(*v)) {
          throw DataError("pressure_GPa is not a number: '" + value + "'", line_no);
        }
        data.pressure_gpa = *v;
      } else if (key == "label") {
        data.label = value;
      }
      continue;
    }

    const auto fields = split(line, ',');
    if (!t_col) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] == "T_K") t_col = i;
        if (fields[i] == "chi_emu_mol") chi_col = i;
      }
      if (!t_col || !chi_col) {
        throw DataError("header must contain columns T_K and chi_emu_mol", line_no);
      }
      n_cols = fields.size();
      continue;
    }

    if (fields.size() < n_cols) {
      throw DataError("expected " + std::to_string(n_cols) + " columns, got " +
                          std::to_string(fields.size()),
                      line_no);
    }
    const auto t = to_double(fields[*t_col]);
    const auto chi = to_double(fields[*chi_col]);
    if (!t) throw DataError("malformed temperature '" + std::string(fields[*t_col]) + "'", line_no);
    if (!chi) throw DataError("malformed susceptibility '" + std::string(fields[*chi_col]) + "'", line_no);
    if (!std::isfinite(*t) || !(*t > 0.0)) {
      throw DataError("temperature must be positive and finite", line_no);
    }
    if (!std::isfinite(*chi) || !(*chi > 0.0)) {
      throw DataError("susceptibility must be positive and finite", line_no);
    }
    rows.push_back({{*t, *chi}, line_no});
  }

  if (!t_col) throw DataError("missing header row T_K,chi_emu_mol");

  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.first.temperature_k < b.first.temperature_k;
  });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].first.temperature_k == rows[i - 1].first.temperature_k) {
      throw DataError("duplicate temperature " + format_g17(rows[i].first.temperature_k) +
                          " K (also on line " + std::to_string(rows[i - 1].second) + ")",
                      rows[i].second);
    }
  }
  data.points.reserve(rows.size());
  for (const auto& r : rows) data.points.push_back(r.first);
  validate_dataset(data);
  return data;
}

SusceptibilityDataset ingest_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return ingest_csv(ss.str());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

BridgingAngle::BridgingAngle(double degrees, double window_lo, double window_hi)
    : degrees_(degrees) {
  if (!std::isfinite(degrees) || !(degrees > window_lo && degrees < window_hi)) {
    throw ValidationError("bridging angle " + format_g17(degrees) + " deg outside (" +
                          format_g17(window_lo) + ", " + format_g17(window_hi) + ")");
  }
}

Coupling coupling_from_angle(BridgingAngle angle) {
  return Coupling(106.0 * angle.degrees() - 10387.0);
}

std::vector<EngineCurvePoint> engine_curve(Coupling j_a, Coupling j_b, Temperature t_cold,
                                           std::span<const double> t_hot_axis) {
  std::vector<EngineCurvePoint> curve;
  curve.reserve(t_hot_axis.size());
  for (double th : t_hot_axis) {
    const CycleSpec spec(j_a, j_b, Temperature(th), t_cold);
    EngineCurvePoint p;
    p.t_hot_k = th;
    p.ledger = assemble_ledger(spec);
    p.mode = classify_mode(p.ledger);
    p.eta_carnot = carnot_efficiency(spec.t_hot(), spec.t_cold());
    if (p.mode == OperationMode::HeatEngine) {
      p.eta = p.ledger.work / p.ledger.q_in;
    }
    curve.push_back(p);
  }
  return curve;
}

std::string engine_curve_csv(std::span<const EngineCurvePoint> curve) {
  std::string out = "T_h_K,Q_AB_eV,Q_BC_eV,Q_CD_eV,Q_DA_eV,W_eV,eta,eta_carnot,mode\n";
  for (const auto& p : curve) {
    const auto& l = p.ledger;
    for (double v : {p.t_hot_k, kelvin_to_ev(l.q_ab), kelvin_to_ev(l.q_bc), kelvin_to_ev(l.q_cd),
                     kelvin_to_ev(l.q_da), kelvin_to_ev(l.work)}) {
      out += format_g17(v);
      out += ',';
    }
    if (p.eta) out += format_g17(*p.eta);
    out += ',';
    out += format_g17(p.eta_carnot);
    out += ',';
    out += to_token(p.mode);
    out += '\n';
  }
  return out;
}

}  // namespace spin_stirling
