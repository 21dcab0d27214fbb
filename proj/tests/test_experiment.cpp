#include <doctest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nlwave/diagnostics.hpp"
#include "nlwave/experiment.hpp"
#include "nlwave/presets.hpp"
#include "nlwave/spectral.hpp"

using namespace nlwave;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json minimal_config() {
  return json{
      {"grid", {{"n", 64}, {"period_pi", 2}}},
      {"kernel1", {{"family", "exponential"}}},
      {"kernel2", {{"family", "exponential"}}},
      {"nonlinearity", {{"family", "zero"}}},
      {"initial",
       {{"preset", "cosine"}, {"phi_amplitude", {1.0, 0.0}}, {"phi_mode", {1, 0}}}},
      {"evolution", {{"dt", 1e-2}, {"t_end", 0.1}}},
  };
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir(const char* tag) {
  fs::path d = fs::temp_directory_path() / (std::string("nlwave_test_") + tag);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("a config without initial data defaults to the zero state") {
  json doc = minimal_config();
  doc.erase("initial");
  ExperimentConfig cfg = parse_config(doc);
  CHECK(sup_norm(cfg.initial.u1) == 0.0);
  CHECK(sup_norm(cfg.initial.v2) == 0.0);
  CHECK(cfg.resolved["initial"]["preset"] == "zero");
}

TEST_CASE("parse_config fills documented defaults") {
  ExperimentConfig cfg = parse_config(minimal_config());
  CHECK(cfg.grid->size() == 64);
  CHECK(cfg.evolution.blowup_threshold == 1e6);
  CHECK(cfg.evolution.observer_stride == 1);
  CHECK_FALSE(cfg.evolution.dealias);
  CHECK(cfg.diagnostics.energy);
  CHECK_FALSE(cfg.diagnostics.certificate.has_value());
  CHECK(cfg.output.csv == "series.csv");
  // the echo carries the resolved values
  CHECK(cfg.resolved["evolution"]["blowup_threshold"] == 1e6);
  CHECK(cfg.resolved["grid"]["period"].get<double>() ==
        doctest::Approx(2 * 3.14159265358979323846));
}

TEST_CASE("parse_config aggregates all validation errors") {
  json bad = minimal_config();
  bad["kernel1"]["family"] = "foo";
  bad["evolution"]["dt"] = -1.0;
  bad["grid"]["n"] = 48;
  try {
    parse_config(bad);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.issues().size() >= 3);
    bool kernel = false, dt = false, grid = false;
    for (const std::string& i : e.issues()) {
      if (i.find("kernel1.family") != std::string::npos) kernel = true;
      if (i.find("evolution.dt") != std::string::npos) dt = true;
      if (i.find("grid") != std::string::npos) grid = true;
    }
    CHECK(kernel);
    CHECK(dt);
    CHECK(grid);
  }
}

TEST_CASE("unknown keys and sections are reported with their paths") {
  json bad = minimal_config();
  bad["evolution"]["dtt"] = 1e-2;
  bad["extra_section"] = json::object();
  try {
    parse_config(bad);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    bool dtt = false, extra = false;
    for (const std::string& i : e.issues()) {
      if (i.find("evolution.dtt") != std::string::npos) dtt = true;
      if (i.find("extra_section") != std::string::npos) extra = true;
    }
    CHECK(dtt);
    CHECK(extra);
  }
}

TEST_CASE("config echo round-trips") {
  ExperimentConfig cfg = parse_config(minimal_config());
  ExperimentConfig cfg2 = parse_config(cfg.resolved);
  CHECK(cfg.resolved == cfg2.resolved);

  // a preset config with every section round-trips too
  const Preset* p = find_preset("blowup-negative-energy");
  REQUIRE(p);
  ExperimentConfig a = parse_config(p->config);
  ExperimentConfig b = parse_config(a.resolved);
  CHECK(a.resolved == b.resolved);
}

TEST_CASE("overrides") {
  json doc = minimal_config();
  apply_override(doc, "evolution.dt=5e-3");
  apply_override(doc, "output.csv=custom.csv");
  CHECK(doc["evolution"]["dt"] == 5e-3);
  CHECK(doc["output"]["csv"] == "custom.csv");
  CHECK_THROWS_AS(apply_override(doc, "no_equals_sign"), ConfigError);

  // paths may create nested sections, and JSON values parse as JSON
  apply_override(doc, "diagnostics.certificate.nu=0.25");
  CHECK(doc["diagnostics"]["certificate"]["nu"] == 0.25);
  apply_override(doc, "evolution.dealias=true");
  CHECK(doc["evolution"]["dealias"] == true);
  ExperimentConfig cfg = parse_config(doc);
  CHECK(cfg.diagnostics.certificate->nu == 0.25);
  CHECK(cfg.evolution.dealias);
}

TEST_CASE("preset catalog") {
  const auto& cat = preset_catalog();
  REQUIRE(cat.size() == 6);
  const char* names[] = {"linear-dispersion",      "energy-conservation",
                         "blowup-negative-energy", "blowup-positive-energy",
                         "global-smooth-kernel",   "global-singular-kernel"};
  for (const char* n : names) {
    const Preset* p = find_preset(n);
    REQUIRE_MESSAGE(p != nullptr, n);
    CHECK_FALSE(p->description.empty());
    CHECK_NOTHROW(parse_config(p->config));
  }
  CHECK(find_preset("no-such") == nullptr);
}

TEST_CASE("blow-up preset data has definitively negative energy") {
  const Preset* p = find_preset("blowup-negative-energy");
  REQUIRE(p);
  ExperimentConfig cfg = parse_config(p->config);
  CHECK(cfg.nonlinearity.params[0] < 0.0);
  EnergyBreakdown e0 =
      energy(State{0.0, cfg.initial.u1, cfg.initial.u2, cfg.initial.v1,
                   cfg.initial.v2},
             cfg.kernel1, cfg.kernel2, cfg.nonlinearity);
  CHECK(e0.total <= -0.1);
}

TEST_CASE("run_scenario emits the CSV/report contract deterministically") {
  fs::path dir = temp_dir("run");
  json doc = minimal_config();
  doc["evolution"]["observer_stride"] = 2;
  doc["diagnostics"] = {{"energy", true}, {"linear_reference", true}};
  doc["output"] = {{"csv", (dir / "a.csv").string()},
                   {"report", (dir / "a.json").string()}};
  ExperimentConfig cfg = parse_config(doc);
  RunReport rep = run_scenario(cfg);
  CHECK(rep.outcome == Outcome::Completed);
  CHECK(rep.exit_code == 0);

  const std::string csv = slurp((dir / "a.csv").string());
  CHECK(csv.rfind("t,E_total,kinetic1,kinetic2,potential,sup_u1,sup_u2,err_linear\n",
                  0) == 0);
  // 0.1/0.01 = 10 steps, stride 2 -> snapshots at 0,2,4,6,8,10
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);

  json report = json::parse(slurp((dir / "a.json").string()));
  CHECK(report["outcome"]["status"] == "completed");
  CHECK(report["exit_code"] == 0);
  CHECK(report["max_err_linear"].get<double>() < 1e-10);

  // byte-identical CSV on a second run; reports differ only in timing
  doc["output"] = {{"csv", (dir / "b.csv").string()},
                   {"report", (dir / "b.json").string()}};
  run_scenario(parse_config(doc));
  std::string csv_b = slurp((dir / "b.csv").string());
  CHECK(csv == csv_b);
  json report_b = json::parse(slurp((dir / "b.json").string()));
  report.erase("timing_ms");
  report_b.erase("timing_ms");
  report["outputs"] = report_b["outputs"] = nullptr;
  report["config"]["output"] = report_b["config"]["output"] = nullptr;
  CHECK(report == report_b);
}

TEST_CASE("run_scenario reports blow-up with certificate and exit code 2") {
  fs::path dir = temp_dir("blow");
  const Preset* p = find_preset("blowup-negative-energy");
  REQUIRE(p);
  json doc = p->config;
  // shrink the grid for test speed; the scenario still blows up
  doc["grid"]["n"] = 128;
  doc["output"] = {{"csv", (dir / "c.csv").string()},
                   {"report", (dir / "c.json").string()}};
  ExperimentConfig cfg = parse_config(doc);
  RunReport rep = run_scenario(cfg);
  CHECK(rep.outcome == Outcome::BlowupDetected);
  CHECK(rep.exit_code == 2);
  CHECK(rep.document["certificate"]["status"] == "negative_energy");
  CHECK(rep.document["outcome"].contains("bracket"));
  const std::string csv = slurp((dir / "c.csv").string());
  CHECK(csv.substr(0, csv.find('\n')) ==
        "t,E_total,kinetic1,kinetic2,potential,sup_u1,sup_u2,Phi");
  // growth-condition hypothesis covers the visited range
  bool found = false;
  for (const auto& h : rep.document["hypothesis_reports"]) {
    if (h["predicate"] == "growth_condition") {
      found = true;
      CHECK(h["pass"].get<bool>());
      CHECK(h["covers_visited_range"].get<bool>());
    }
  }
  CHECK(found);
}

TEST_CASE("io failures are distinct from numerical outcomes") {
  json doc = minimal_config();
  doc["output"] = {{"csv", "/nonexistent_dir_zzz/a.csv"},
                   {"report", "/nonexistent_dir_zzz/a.json"}};
  ExperimentConfig cfg = parse_config(doc);
  CHECK_THROWS_AS(run_scenario(cfg), IoError);
}

#ifdef NLWAVE_CLI_PATH
TEST_CASE("cli exit-status contract") {
  fs::path dir = temp_dir("cli");
  const std::string cli = NLWAVE_CLI_PATH;

  auto run_cli = [&](const std::string& args) {
    const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  };

  // completed scenario -> 0
  {
    std::ofstream out(dir / "ok.json");
    out << minimal_config().dump();
  }
  CHECK(run_cli("run " + (dir / "ok.json").string() + " --output-dir " +
                (dir / "ok_out").string() + " --quiet") == 0);

  // blow-up -> 2 (small grid override keeps it quick)
  {
    std::ofstream out(dir / "blow.json");
    out << find_preset("blowup-negative-energy")->config.dump();
  }
  CHECK(run_cli("run " + (dir / "blow.json").string() +
                " --override grid.n=128 --output-dir " +
                (dir / "blow_out").string() + " --quiet") == 2);

  // corrupted -> 3 (inline data with a huge amplitude overflows the cubic)
  {
    json doc = minimal_config();
    std::vector<double> huge(64, 0.0);
    for (std::size_t i = 0; i < huge.size(); ++i)
      huge[i] = 1e160 * std::cos(2 * 3.141592653589793 * double(i) / 64.0);
    doc["initial"] = {{"preset", "inline"}, {"u1", huge}};
    doc["nonlinearity"] = {{"family", "quartic"}, {"kappa1", 1.0}, {"kappa2", 0.0}};
    doc["evolution"]["blowup_threshold"] = 1e300;
    doc["diagnostics"] = {{"energy", false}};
    std::ofstream out(dir / "bad.json");
    out << doc.dump();
  }
  CHECK(run_cli("run " + (dir / "bad.json").string() + " --output-dir " +
                (dir / "bad_out").string() + " --quiet") == 3);

  // config error -> 1
  {
    std::ofstream out(dir / "cfg.json");
    out << R"({"grid": {"n": 48, "period": 1}})";
  }
  CHECK(run_cli("run " + (dir / "cfg.json").string() + " --quiet") == 1);
  CHECK(run_cli("run " + (dir / "missing.json").string() + " --quiet") == 1);

  // io error -> 4 (unwritable absolute output path)
  {
    json doc = minimal_config();
    doc["output"] = {{"csv", "/nonexistent_dir_zzz/out.csv"},
                     {"report", "/nonexistent_dir_zzz/out.json"}};
    std::ofstream out(dir / "io.json");
    out << doc.dump();
  }
  CHECK(run_cli("run " + (dir / "io.json").string() + " --quiet") == 4);

  // presets / describe
  CHECK(run_cli("presets") == 0);
  CHECK(run_cli("describe linear-dispersion") == 0);
  CHECK(run_cli("describe nope") == 1);
}
#endif
