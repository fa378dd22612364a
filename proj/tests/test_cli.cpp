#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

const fs::path kData = SPIN_STIRLING_DATA_DIR;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome run_args(const std::vector<std::string>& args) {
  std::vector<std::string> owned{"spin_stirling"};
  owned.insert(owned.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : owned) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Outcome o;
  o.code = spin_stirling::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

Outcome run_cli(std::initializer_list<std::string> args) { return run_args(args); }

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "spin_stirling_cli_XXXXXX").string();
    path = mkdtemp(tmpl.data());
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("cycle") {
  SUBCASE("heat engine example") {
    const auto o = run_cli({"cycle", "--ja-k", "-42", "--jb-k", "-32", "--th", "40", "--tc", "20", "--json"});
    REQUIRE(o.code == 0);
    const auto j = Json::parse(o.out);
    CHECK(j["mode"] == "heat_engine");
    CHECK(j["eta"].get<double>() < 0.5);
    CHECK(j["eta_carnot"].get<double>() == 0.5);
    CHECK(j["ledger_eV"]["work"].get<double>() ==
          doctest::Approx(j["ledger_K"]["work"].get<double>() * 8.617333262e-5).epsilon(1e-15));
    CHECK(j["config"]["th"].get<double>() == 40.0);
    // k_B T_h exceeds |J_B| here
    CHECK(o.err.find("warning") != std::string::npos);
  }
  SUBCASE("table output") {
    const auto o = run_cli({"cycle", "--ja-k", "-42", "--jb-k", "-32", "--th", "40", "--tc", "20"});
    REQUIRE(o.code == 0);
    CHECK(o.out.find("mode        heat_engine") != std::string::npos);
    CHECK(o.out.find("energy [eV]") != std::string::npos);
    CHECK(o.out.find("eta         ") != std::string::npos);
  }
  SUBCASE("no efficiency outside heat-engine mode") {
    const auto o = run_cli({"cycle", "--ja-k", "-16", "--jb-k", "-32", "--th", "24", "--tc", "20", "--json"});
    REQUIRE(o.code == 0);
    const auto j = Json::parse(o.out);
    CHECK(j["mode"] == "refrigerator");
    CHECK(j["eta"].is_null());
  }
  SUBCASE("validation errors name the flag") {
    auto o = run_cli({"cycle", "--ja-k", "-42", "--jb-k", "-32", "--th", "20", "--tc", "40"});
    CHECK(o.code == 2);
    CHECK(o.err.find("--th") != std::string::npos);
    CHECK(o.err.find("t_hot must exceed t_cold") != std::string::npos);

    o = run_cli({"cycle", "--ja-k", "-32", "--jb-k", "-32", "--th", "40", "--tc", "20"});
    CHECK(o.code == 2);
    CHECK(o.err.find("zero-width") != std::string::npos);

    o = run_cli({"cycle", "--ja-k", "-2e4", "--jb-k", "-32", "--th", "40", "--tc", "20"});
    CHECK(o.code == 2);
    CHECK(o.err.find("--ja-k") != std::string::npos);

    o = run_cli({"cycle", "--ja-k", "-42", "--jb-k", "-32", "--th", "40", "--tc", "-1"});
    CHECK(o.code == 2);
    CHECK(o.err.find("--tc") != std::string::npos);

    o = run_cli({"cycle", "--ja-k", "abc", "--jb-k", "-32", "--th", "40", "--tc", "20"});
    CHECK(o.code == 2);
    CHECK(o.err.find("--ja-k") != std::string::npos);

    o = run_cli({"cycle", "--ja-k", "-42", "--th", "40", "--tc", "20"});
    CHECK(o.code == 2);
    CHECK(o.err.find("--jb-k") != std::string::npos);
  }
  SUBCASE("byte-identical repeat") {
    const auto a = run_cli({"cycle", "--ja-k", "-42", "--jb-k", "-32", "--th", "40", "--tc", "20", "--json"});
    const auto b = run_cli({"cycle", "--ja-k", "-42", "--jb-k", "-32", "--th", "40", "--tc", "20", "--json"});
    CHECK(a.out == b.out);
  }
}

TEST_CASE("no subcommand and help") {
  CHECK(run_cli({}).code == 2);
  const auto h = run_cli({"--help"});
  CHECK(h.code == 0);
  CHECK(h.out.find("engine-curve") != std::string::npos);
}

TEST_CASE("config files") {
  TempDir tmp;
  SUBCASE("flags override the file, the echo shows the result") {
    std::ofstream(tmp / "c.ini") << "[cycle]\nja-k=-42\njb-k=-32\nth=40\ntc=20\n";
    const auto o = run_cli({"--config", tmp / "c.ini", "cycle", "--th", "30", "--json"});
    REQUIRE(o.code == 0);
    const auto j = Json::parse(o.out);
    CHECK(j["config"]["th"].get<double>() == 30.0);
    CHECK(j["config"]["ja-k"].get<double>() == -42.0);
  }
  SUBCASE("unknown keys are rejected") {
    std::ofstream(tmp / "bad.ini") << "[cycle]\nja-k=-42\njb-k=-32\nth=40\ntc=20\nthot=50\n";
    CHECK(run_cli({"--config", tmp / "bad.ini", "cycle"}).code == 2);
  }
  SUBCASE("missing config file") {
    CHECK(run_cli({"--config", tmp / "none.ini", "cycle"}).code == 2);
  }
}

TEST_CASE("sweep") {
  TempDir tmp;
  const std::string small_grid[] = {"--ratio-steps", "9", "--temp-ratio-steps", "5"};
  auto sweep_to = [&](const std::string& path, std::initializer_list<std::string> extra) {
    std::vector<std::string> args{"sweep", "--out", path};
    args.insert(args.end(), std::begin(small_grid), std::end(small_grid));
    args.insert(args.end(), extra.begin(), extra.end());
    return run_args(args);
  };

  SUBCASE("csv with config sidecar that reproduces the run") {
    const auto o = sweep_to(tmp / "m.csv", {});
    REQUIRE(o.code == 0);
    CHECK(o.out.starts_with("cells 45\n"));
    const auto csv = slurp(tmp / "m.csv");
    CHECK(count_lines(csv) == 46);
    REQUIRE(fs::exists(tmp / "m.csv.config"));
    const auto sidecar = slurp(tmp / "m.csv.config");
    CHECK(sidecar.starts_with("[sweep]\n"));
    CHECK(sidecar.find("ratio-steps=9\n") != std::string::npos);

    fs::rename(tmp / "m.csv", tmp / "first.csv");
    const auto again = run_cli({"--config", tmp / "m.csv.config", "sweep"});
    REQUIRE(again.code == 0);
    CHECK(slurp(tmp / "m.csv") == slurp(tmp / "first.csv"));
  }
  SUBCASE("1x1 grid gives a single-cell file") {
    REQUIRE(run_cli({"sweep", "--ratio-steps", "1", "--temp-ratio-steps", "1", "--out", tmp / "one.csv"})
                .code == 0);
    CHECK(count_lines(slurp(tmp / "one.csv")) == 2);
  }
  SUBCASE("thread count does not change the file") {
    REQUIRE(sweep_to(tmp / "t.csv", {"--threads", "1"}).code == 0);
    const auto serial = slurp(tmp / "t.csv");
    const auto serial_config = slurp(tmp / "t.csv.config");
    REQUIRE(sweep_to(tmp / "t.csv", {"--threads", "4"}).code == 0);
    CHECK(slurp(tmp / "t.csv") == serial);
    CHECK(slurp(tmp / "t.csv.config") == serial_config);
  }
  SUBCASE("json output is deterministic and echoes the config") {
    REQUIRE(sweep_to(tmp / "a.json", {"--format", "json"}).code == 0);
    REQUIRE(sweep_to(tmp / "a2.json", {"--format", "json"}).code == 0);
    const auto text = slurp(tmp / "a.json");
    const auto j = Json::parse(text);
    CHECK(j["config"]["ratio-steps"] == 9);
    CHECK(j["cells"].size() == 45);
    // the second run wrote a different path, so only the "out" echo differs
    auto j2 = Json::parse(slurp(tmp / "a2.json"));
    j2["config"]["out"] = j["config"]["out"];
    CHECK(j2.dump() == j.dump());
  }
  SUBCASE("branches give different maps") {
    REQUIRE(sweep_to(tmp / "neg.csv", {"--branch", "b-negative"}).code == 0);
    REQUIRE(sweep_to(tmp / "pos.csv", {"--branch", "b-positive"}).code == 0);
    CHECK(slurp(tmp / "neg.csv") != slurp(tmp / "pos.csv"));
  }
  SUBCASE("errors") {
    CHECK(run_cli({"sweep"}).code == 2);
    CHECK(sweep_to((tmp.path / "no" / "such" / "dir.csv").string(), {}).code == 3);
    auto o = sweep_to(tmp / "x.csv", {"--branch", "sideways"});
    CHECK(o.code == 2);
    CHECK(o.err.find("--branch") != std::string::npos);
    o = sweep_to(tmp / "x.csv", {"--format", "xml"});
    CHECK(o.code == 2);
    CHECK(run_cli({"sweep", "--temp-ratio-max", "1", "--out", tmp / "x.csv"}).code == 2);
    CHECK(run_cli({"sweep", "--ratio-min", "2", "--ratio-max", "1", "--out", tmp / "x.csv"}).code == 2);
  }
  SUBCASE("thread count from the environment") {
    setenv("SPIN_STIRLING_THREADS", "lots", 1);
    const auto o = sweep_to(tmp / "env.csv", {});
    CHECK(o.code == 2);
    CHECK(o.err.find("SPIN_STIRLING_THREADS") != std::string::npos);
    setenv("SPIN_STIRLING_THREADS", "3", 1);
    CHECK(sweep_to(tmp / "env.csv", {}).code == 0);
    // an explicit flag wins over a bad environment value
    setenv("SPIN_STIRLING_THREADS", "lots", 1);
    CHECK(sweep_to(tmp / "env.csv", {"--threads", "2"}).code == 0);
    unsetenv("SPIN_STIRLING_THREADS");
  }
}

TEST_CASE("fit") {
  TempDir tmp;
  const std::string ambient = (kData / "cu_dimer_ambient.csv").string();
  SUBCASE("report on stdout with the documented keys in order") {
    const auto o = run_cli({"fit", "--data", ambient});
    REQUIRE(o.code == 0);
    const auto j = Json::parse(o.out);
    const std::vector<std::string> head{"j_over_kb_K", "g",     "residual_rms", "converged",
                                        "iterations",  "pressure_GPa", "label"};
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    REQUIRE(keys.size() >= head.size());
    CHECK(std::vector(keys.begin(), keys.begin() + head.size()) == head);
    CHECK(j["j_over_kb_K"].get<double>() == doctest::Approx(-32.0).epsilon(0.10));
    CHECK(j["g"].get<double>() == 2.1);
    CHECK(j["converged"] == true);
    CHECK(j["pressure_GPa"].get<double>() == 0.0);
    CHECK(j["config"]["fix-g"].get<double>() == 2.1);
  }
  SUBCASE("free g to a file") {
    const auto o = run_cli({"fit", "--data", ambient, "--free-g", "--out", tmp / "r.json"});
    REQUIRE(o.code == 0);
    CHECK(o.out.empty());
    const auto j = Json::parse(slurp(tmp / "r.json"));
    CHECK(j["g"].get<double>() != 2.1);
    CHECK(j["std_errors"].size() == 2);
    CHECK(j["config"]["free-g"] == true);
  }
  SUBCASE("errors") {
    std::ofstream(tmp / "empty.csv").close();
    auto o = run_cli({"fit", "--data", tmp / "empty.csv"});
    CHECK(o.code == 4);
    CHECK_FALSE(o.err.empty());
    std::ofstream(tmp / "bad.csv") << "T_K,chi_emu_mol\n10,0.05\n20,abc\n30,0.03\n40,0.02\n50,0.01\n";
    o = run_cli({"fit", "--data", tmp / "bad.csv"});
    CHECK(o.code == 4);
    CHECK(o.err.find("line 3") != std::string::npos);
    CHECK(run_cli({"fit", "--data", tmp / "missing.csv"}).code == 3);
    o = run_cli({"fit", "--data", ambient, "--fix-g", "0"});
    CHECK(o.code == 2);
    CHECK(o.err.find("--fix-g") != std::string::npos);
    CHECK(run_cli({"fit", "--data", ambient, "--fix-g", "2", "--free-g"}).code == 2);
    CHECK(run_cli({"fit", "--data", ambient, "--out", (tmp.path / "no" / "r.json").string()}).code == 3);
  }
}

TEST_CASE("engine-curve") {
  TempDir tmp;
  SUBCASE("efficiency tends to Carnot near T_h = T_c") {
    const auto o = run_cli({"engine-curve", "--ja-k", "-42", "--jb-k", "-32", "--tc", "20", "--th-min",
                            "20.02", "--th-max", "350", "--steps", "12", "--out", tmp / "e.csv"});
    REQUIRE(o.code == 0);
    std::istringstream csv(slurp(tmp / "e.csv"));
    std::string header, first;
    std::getline(csv, header);
    std::getline(csv, first);
    CHECK(header == "T_h_K,Q_AB_eV,Q_BC_eV,Q_CD_eV,Q_DA_eV,W_eV,eta,eta_carnot,mode");
    std::vector<std::string> fields;
    std::istringstream row(first);
    for (std::string f; std::getline(row, f, ',');) fields.push_back(f);
    REQUIRE(fields.size() == 9);
    CHECK(std::stod(fields[6]) / std::stod(fields[7]) > 0.99);
    CHECK(fields[8] == "heat_engine");
    CHECK(slurp(tmp / "e.csv.config").starts_with("[engine-curve]\n"));
  }
  SUBCASE("single step") {
    REQUIRE(run_cli({"engine-curve", "--ja-k", "-42", "--jb-k", "-32", "--tc", "20", "--th-min", "30",
                     "--th-max", "30", "--steps", "1", "--out", tmp / "one.csv"})
                .code == 0);
    CHECK(count_lines(slurp(tmp / "one.csv")) == 2);
  }
  SUBCASE("errors") {
    auto o = run_cli({"engine-curve", "--ja-k", "-42", "--jb-k", "-32", "--tc", "20", "--th-min", "20",
                      "--th-max", "30", "--steps", "3", "--out", tmp / "x.csv"});
    CHECK(o.code == 2);
    CHECK(o.err.find("--th-min") != std::string::npos);
    o = run_cli({"engine-curve", "--ja-k", "-42", "--jb-k", "-32", "--tc", "20", "--th-min", "25",
                 "--th-max", "30", "--steps", "0", "--out", tmp / "x.csv"});
    CHECK(o.code == 2);
    o = run_cli({"engine-curve", "--ja-k", "-42", "--jb-k", "-32", "--tc", "20", "--th-min", "25",
                 "--th-max", "30", "--steps", "3", "--out", (tmp.path / "no" / "x.csv").string()});
    CHECK(o.code == 3);
  }
}
