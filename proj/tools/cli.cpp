#include "cli.hpp"

#include <array>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spin_stirling/bleaney_bowers_fit.hpp"
#include "spin_stirling/cycle.hpp"
#include "spin_stirling/error.hpp"
#include "spin_stirling/magnetometry.hpp"
#include "spin_stirling/phasemap.hpp"

namespace spin_stirling::cli {
namespace {

using Json = nlohmann::ordered_json;

// Bad flag value, reported with the flag's name.
class UsageError : public Error {
 public:
  UsageError(std::string_view flag, const std::string& what)
      : Error(std::string(flag) + ": " + what) {}
};

// Runs `make` and attributes any ValidationError to `flag`.
template <class F>
auto for_flag(std::string_view flag, F&& make) {
  try {
    return make();
  } catch (const ValidationError& e) {
    throw UsageError(flag, e.what());
  }
}

std::string shortest(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

// The resolved configuration of one command, kept in flag order. It is echoed
// as a JSON object or as an INI sidecar that `--config` reads back.
class ResolvedConfig {
 public:
  explicit ResolvedConfig(std::string command) : command_(std::move(command)) {}

  void set(const std::string& key, Json value) { values_[key] = std::move(value); }

  Json to_json() const {
    Json j;
    j["command"] = command_;
    for (const auto& [k, v] : values_.items()) j[k] = v;
    return j;
  }

  std::string to_ini() const {
    std::ostringstream s;
    s << "[" << command_ << "]\n";
    for (const auto& [k, v] : values_.items()) {
      s << k << "=";
      if (v.is_number_float()) {
        s << shortest(v.get<double>());
      } else {
        s << v.dump();  // strings quoted, bools and integers bare
      }
      s << "\n";
    }
    return s.str();
  }

 private:
  std::string command_;
  Json values_ = Json::object();
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("write to '" + path + "' failed");
}

void write_sidecar(const std::string& out_path, const ResolvedConfig& config) {
  write_text(out_path + ".config", config.to_ini());
}

Json ledger_json(const StrokeLedger& l, double scale) {
  Json j;
  j["q_ab"] = l.q_ab * scale;
  j["q_bc"] = l.q_bc * scale;
  j["q_cd"] = l.q_cd * scale;
  j["q_da"] = l.q_da * scale;
  j["work"] = l.work * scale;
  j["q_in"] = l.q_in * scale;
  j["q_out"] = l.q_out * scale;
  return j;
}

// ---------------------------------------------------------------- cycle

struct CycleArgs {
  double ja = 0, jb = 0, th = 0, tc = 0;
  bool json = false;
};

int cmd_cycle(const CycleArgs& a, std::ostream& out, std::ostream& err) {
  const auto ja = for_flag("--ja-k", [&] { return Coupling(a.ja); });
  const auto jb = for_flag("--jb-k", [&] { return Coupling(a.jb); });
  const auto th = for_flag("--th", [&] { return Temperature(a.th); });
  const auto tc = for_flag("--tc", [&] { return Temperature(a.tc); });
  if (!(a.th > a.tc)) throw UsageError("--th", "t_hot must exceed t_cold");
  if (a.ja == a.jb) throw UsageError("--jb-k", "zero-width cycle: J_A equals J_B");
  const CycleSpec spec(ja, jb, th, tc);

  for (const auto& w : regime_warnings(spec)) err << "warning: " << w << "\n";

  const auto l = assemble_ledger(spec);
  const auto mode = classify_mode(l);
  const double eta_c = carnot_efficiency(th, tc);
  const bool engine = mode == OperationMode::HeatEngine;
  const double eta = engine ? l.work / l.q_in : 0.0;

  ResolvedConfig config("cycle");
  config.set("ja-k", a.ja);
  config.set("jb-k", a.jb);
  config.set("th", a.th);
  config.set("tc", a.tc);

  if (a.json) {
    Json j;
    j["config"] = config.to_json();
    j["ledger_K"] = ledger_json(l, 1.0);
    j["ledger_eV"] = ledger_json(l, constants::kBoltzmannEv);
    j["mode"] = std::string(to_token(mode));
    j["eta"] = nullptr;
    if (engine) j["eta"] = eta;
    j["eta_carnot"] = eta_c;
    out << j.dump(2) << "\n";
    return kExitOk;
  }

  const std::array<std::pair<const char*, double>, 7> rows{{{"Q_AB", l.q_ab},
                                                            {"Q_BC", l.q_bc},
                                                            {"Q_CD", l.q_cd},
                                                            {"Q_DA", l.q_da},
                                                            {"W", l.work},
                                                            {"Q_in", l.q_in},
                                                            {"Q_out", l.q_out}}};
  out << std::left << std::setw(8) << "" << std::right << std::setw(26) << "energy/k_B [K]"
      << std::setw(26) << "energy [eV]" << "\n";
  out << std::scientific << std::setprecision(16);
  for (const auto& [name, v] : rows) {
    out << std::left << std::setw(8) << name << std::right << std::setw(26) << v << std::setw(26)
        << kelvin_to_ev(v) << "\n";
  }
  out << std::defaultfloat << std::setprecision(17);
  out << "mode        " << to_token(mode) << "\n";
  if (engine) out << "eta         " << eta << "\n";
  out << "eta_carnot  " << eta_c << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::string branch = "b-negative";
  double jb = 32.0;
  double tc = 20.0;
  double ratio_min = -3.0, ratio_max = 3.0;
  std::size_t ratio_steps = 400;
  double temp_ratio_max = 3.0;
  std::size_t temp_ratio_steps = 400;
  std::string format = "csv";
  std::string out;
  std::optional<unsigned> threads;
};

unsigned resolve_threads(const std::optional<unsigned>& flag) {
  if (flag) return *flag;
  const char* env = std::getenv("SPIN_STIRLING_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  unsigned v = 0;
  const std::string_view s(env);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw UsageError("SPIN_STIRLING_THREADS", "not a non-negative integer: '" + std::string(s) + "'");
  }
  return v;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  const auto branch = branch_from_token(a.branch);
  if (!branch) throw UsageError("--branch", "expected b-positive or b-negative, got '" + a.branch + "'");
  if (a.format != "csv" && a.format != "json") {
    throw UsageError("--format", "expected csv or json, got '" + a.format + "'");
  }
  const SweepAnchor anchor{for_flag("--jb-k", [&] { return Coupling(a.jb); }),
                           for_flag("--tc", [&] { return Temperature(a.tc); })};
  if (a.jb == 0.0) throw UsageError("--jb-k", "|J_B| must be non-zero");
  if (a.ratio_steps == 0) throw UsageError("--ratio-steps", "must be at least 1");
  if (a.temp_ratio_steps == 0) throw UsageError("--temp-ratio-steps", "must be at least 1");
  if (!(a.temp_ratio_max > 1.0)) throw UsageError("--temp-ratio-max", "must exceed 1");
  if (a.ratio_steps > 1 && !(a.ratio_max > a.ratio_min)) {
    throw UsageError("--ratio-max", "must exceed --ratio-min");
  }
  const auto grid = for_flag("--ratio-min", [&] {
    return SweepGrid::uniform(a.ratio_min, a.ratio_max, a.ratio_steps, a.temp_ratio_max,
                              a.temp_ratio_steps, anchor, *branch);
  });
  const unsigned threads = resolve_threads(a.threads);
  const auto cells = sweep(grid, SweepOptions{threads});

  // Threads change nothing in the output, so they are not part of the echo.
  ResolvedConfig config("sweep");
  config.set("branch", a.branch);
  config.set("jb-k", a.jb);
  config.set("tc", a.tc);
  config.set("ratio-min", a.ratio_min);
  config.set("ratio-max", a.ratio_max);
  config.set("ratio-steps", a.ratio_steps);
  config.set("temp-ratio-max", a.temp_ratio_max);
  config.set("temp-ratio-steps", a.temp_ratio_steps);
  config.set("format", a.format);
  config.set("out", a.out);

  std::map<std::string, std::size_t> counts;
  for (auto m : {OperationMode::HeatEngine, OperationMode::Refrigerator, OperationMode::Accelerator,
                 OperationMode::Heater, OperationMode::CarnotDegenerate, OperationMode::Forbidden}) {
    counts[std::string(to_token(m))] = 0;
  }
  counts["invalid"] = 0;
  for (const auto& c : cells) ++counts[c.mode ? std::string(to_token(*c.mode)) : "invalid"];

  if (a.format == "json") {
    Json j;
    j["config"] = config.to_json();
    Json jc = Json::object();
    for (const auto& [k, v] : counts) jc[k] = v;
    j["counts"] = jc;
    j["cells"] = Json::parse(export_cells(cells, ExportFormat::Json));
    write_text(a.out, j.dump(1) + "\n");
  } else {
    export_cells_to_file(cells, ExportFormat::Csv, a.out);
    write_sidecar(a.out, config);
  }

  if (counts["invalid"] > 0) {
    err << "warning: " << counts["invalid"]
        << " cells could not be evaluated (zero-width cycle or coupling beyond the cap)\n";
  }
  out << "cells " << cells.size() << "\n";
  for (const auto& [k, v] : counts) out << std::left << std::setw(14) << k << v << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- fit

struct FitArgs {
  std::string data;
  std::optional<double> fix_g;
  bool free_g = false;
  std::string out;
};

int cmd_fit(const FitArgs& a, std::ostream& out, std::ostream& err) {
  if (a.fix_g && !(*a.fix_g > 0.0 && std::isfinite(*a.fix_g))) {
    throw UsageError("--fix-g", "g must be positive and finite");
  }
  const auto data = ingest_csv_file(a.data);
  const GPolicy policy = a.free_g ? GPolicy(FreeG{}) : GPolicy(FixG{a.fix_g.value_or(2.1)});
  const auto r = fit_bleaney_bowers(data, policy);

  ResolvedConfig config("fit");
  config.set("data", a.data);
  if (a.free_g) {
    config.set("free-g", true);
  } else {
    config.set("fix-g", a.fix_g.value_or(2.1));
  }
  if (!a.out.empty()) config.set("out", a.out);

  Json j;
  j["j_over_kb_K"] = r.j_over_kb;
  j["g"] = r.g;
  j["residual_rms"] = r.residual_rms;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["pressure_GPa"] = nullptr;
  if (data.pressure_gpa) j["pressure_GPa"] = *data.pressure_gpa;
  j["label"] = data.label;
  Json stderr_j = Json::array();
  for (double v : r.covariance_diag) stderr_j.push_back(std::sqrt(v));
  j["std_errors"] = stderr_j;
  j["diagnostic"] = r.diagnostic;
  j["config"] = config.to_json();

  const std::string text = j.dump(2) + "\n";
  if (a.out.empty()) {
    out << text;
  } else {
    write_text(a.out, text);
  }
  if (!r.converged) {
    err << "error: fit did not converge: " << r.diagnostic << "\n";
    return kExitData;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- engine-curve

struct CurveArgs {
  double ja = 0, jb = 0, tc = 0, th_min = 0, th_max = 0;
  std::size_t steps = 0;
  std::string out;
};

int cmd_engine_curve(const CurveArgs& a, std::ostream& out, std::ostream& err) {
  const auto ja = for_flag("--ja-k", [&] { return Coupling(a.ja); });
  const auto jb = for_flag("--jb-k", [&] { return Coupling(a.jb); });
  const auto tc = for_flag("--tc", [&] { return Temperature(a.tc); });
  if (a.ja == a.jb) throw UsageError("--jb-k", "zero-width cycle: J_A equals J_B");
  if (!(a.th_min > a.tc)) throw UsageError("--th-min", "t_hot must exceed t_cold");
  if (a.steps == 0) throw UsageError("--steps", "must be at least 1");
  if (a.steps > 1 && !(a.th_max > a.th_min)) throw UsageError("--th-max", "must exceed --th-min");

  std::vector<double> axis(a.steps);
  for (std::size_t k = 0; k < a.steps; ++k) {
    axis[k] = a.steps == 1 ? a.th_min
                           : a.th_min + (a.th_max - a.th_min) * static_cast<double>(k) /
                                            static_cast<double>(a.steps - 1);
  }
  const auto curve = engine_curve(ja, jb, tc, axis);

  std::size_t warned = 0;
  for (double th : axis) {
    if (!regime_warnings(CycleSpec(ja, jb, Temperature(th), tc)).empty()) ++warned;
  }
  if (warned > 0) {
    err << "warning: " << warned << " of " << axis.size()
        << " points have k_B T above |J| at some stroke endpoint\n";
  }

  ResolvedConfig config("engine-curve");
  config.set("ja-k", a.ja);
  config.set("jb-k", a.jb);
  config.set("tc", a.tc);
  config.set("th-min", a.th_min);
  config.set("th-max", a.th_max);
  config.set("steps", a.steps);
  config.set("out", a.out);

  write_text(a.out, engine_curve_csv(curve));
  write_sidecar(a.out, config);

  std::size_t engines = 0;
  for (const auto& p : curve) engines += p.mode == OperationMode::HeatEngine;
  out << "points " << curve.size() << "\n" << "heat_engine " << engines << "\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exchange-coupling Stirling cycle of a spin-1/2 dimer", "spin_stirling"};
  app.set_config("--config", "", "INI file with one [command] section of flag=value pairs");
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  CycleArgs cycle;
  auto* c = app.add_subcommand("cycle", "Evaluate one cycle: stroke heats, work, mode, efficiency");
  c->add_option("--ja-k", cycle.ja, "J_A/k_B in K")->required();
  c->add_option("--jb-k", cycle.jb, "J_B/k_B in K")->required();
  c->add_option("--th", cycle.th, "hot bath temperature in K")->required();
  c->add_option("--tc", cycle.tc, "cold bath temperature in K")->required();
  c->add_flag("--json", cycle.json, "print JSON instead of a table");

  SweepArgs sw;
  auto* s = app.add_subcommand("sweep", "Operation-mode map over (J_A/J_B, T_h/T_c)");
  s->add_option("--branch", sw.branch, "b-negative or b-positive (sign of J_B)")->capture_default_str();
  s->add_option("--jb-k", sw.jb, "|J_B|/k_B anchor in K")->capture_default_str();
  s->add_option("--tc", sw.tc, "cold bath anchor in K")->capture_default_str();
  s->add_option("--ratio-min", sw.ratio_min, "smallest J_A/J_B")->capture_default_str();
  s->add_option("--ratio-max", sw.ratio_max, "largest J_A/J_B")->capture_default_str();
  s->add_option("--ratio-steps", sw.ratio_steps, "points on the J_A/J_B axis")->capture_default_str();
  s->add_option("--temp-ratio-max", sw.temp_ratio_max, "largest T_h/T_c")->capture_default_str();
  s->add_option("--temp-ratio-steps", sw.temp_ratio_steps, "points on the T_h/T_c axis")
      ->capture_default_str();
  s->add_option("--format", sw.format, "csv or json")->capture_default_str();
  s->add_option("--out", sw.out, "output file")->required();
  s->add_option("--threads", sw.threads, "worker threads, 0 = all cores (default: $SPIN_STIRLING_THREADS or 0)");

  FitArgs fit;
  auto* f = app.add_subcommand("fit", "Fit J (and optionally g) to a chi(T) CSV");
  f->add_option("--data", fit.data, "CSV with T_K,chi_emu_mol columns")->required();
  auto* fix = f->add_option("--fix-g", fit.fix_g, "hold g at this value (default 2.1)");
  auto* free = f->add_flag("--free-g", fit.free_g, "fit g as well");
  fix->excludes(free);
  f->add_option("--out", fit.out, "write the JSON report here instead of stdout");

  CurveArgs curve;
  auto* e = app.add_subcommand("engine-curve", "Work and efficiency against T_h at fixed couplings");
  e->add_option("--ja-k", curve.ja, "J_A/k_B in K")->required();
  e->add_option("--jb-k", curve.jb, "J_B/k_B in K")->required();
  e->add_option("--tc", curve.tc, "cold bath temperature in K")->required();
  e->add_option("--th-min", curve.th_min, "first T_h in K")->required();
  e->add_option("--th-max", curve.th_max, "last T_h in K")->required();
  e->add_option("--steps", curve.steps, "number of T_h points")->required();
  e->add_option("--out", curve.out, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (c->parsed()) return cmd_cycle(cycle, out, err);
    if (s->parsed()) return cmd_sweep(sw, out, err);
    if (f->parsed()) return cmd_fit(fit, out, err);
    if (e->parsed()) return cmd_engine_curve(curve, out, err);
  } catch (const UsageError& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitValidation;
  } catch (const ValidationError& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitValidation;
  } catch (const IoError& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitIo;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitData;
  } catch (const std::exception& ex) {
    err << "internal error: " << ex.what() << "\n";
    return 1;
  }
  return kExitValidation;
}

}  // namespace spin_stirling::cli
