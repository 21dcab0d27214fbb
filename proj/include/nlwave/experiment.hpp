#ifndef NLWAVE_EXPERIMENT_HPP
#define NLWAVE_EXPERIMENT_HPP

#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlwave/diagnostics.hpp"
#include "nlwave/kernels.hpp"
#include "nlwave/nonlinearity.hpp"
#include "nlwave/solver.hpp"

namespace nlwave {

// All validation problems of one parse, with field paths.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CertificateOptions {
  double nu = 0.5;
  double growth_box = 3.0;  // half-width of the growth-condition sample box
};
struct PotentialBoundOptions {
  double k = 0.0;
  double box = 3.0;
};
struct PowerBoundOptions {
  double c = 4.0;
  double k = 0.0;
  double q1 = 4.0 / 3.0;
  double q2 = 4.0 / 3.0;
  double box = 3.0;
};

struct DiagnosticsOptions {
  bool energy = true;
  bool linear_reference = false;
  std::optional<CertificateOptions> certificate;
  std::optional<PotentialBoundOptions> potential_bound;
  std::optional<PowerBoundOptions> power_bound;
};

struct OutputOptions {
  std::string csv = "series.csv";
  std::string report = "report.json";
};

struct ExperimentConfig {
  GridPtr grid;
  WaveOperator kernel1;
  WaveOperator kernel2;
  NonlinearitySpec nonlinearity;
  InitialData initial;
  EvolutionConfig evolution;
  DiagnosticsOptions diagnostics;
  OutputOptions output;
  // Fully resolved document (defaults materialized); parse(echo()) is the
  // identity on it.
  nlohmann::json resolved;
};

// Validates the whole document before any computation; throws ConfigError
// carrying every problem found.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig parse_config_text(const std::string& text);

// "dotted.path=value" overrides applied to a raw document; values parse as
// JSON when possible and fall back to strings.
void apply_override(nlohmann::json& doc, const std::string& assignment);

struct RunReport {
  Outcome outcome = Outcome::Completed;
  int exit_code = 0;
  nlohmann::json document;
};

// Runs the scenario, writes the time-series CSV and the JSON report to the
// configured paths (IoError on write failure), and returns the report.
// Exit codes: 0 completed, 2 blow-up detected, 3 corrupted.
RunReport run_scenario(const ExperimentConfig& cfg);

int exit_code_for(Outcome outcome);

}  // namespace nlwave

#endif
