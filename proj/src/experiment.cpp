#include "nlwave/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "nlwave/presets.hpp"
#include "nlwave/spectral.hpp"
#include "nlwave/version.hpp"

namespace nlwave {

using nlohmann::json;

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::string s = "invalid config:";
  for (const auto& i : issues) {
    s += "\n  - ";
    s += i;
  }
  return s;
}

class Validator {
 public:
  void add(const std::string& path, const std::string& msg) {
    issues_.push_back(path + ": " + msg);
  }
  bool ok() const { return issues_.empty(); }
  void raise_if_failed() {
    if (!ok()) throw ConfigError(std::move(issues_));
  }

  const json* object(const json& j, const std::string& path,
                     const std::string& key, bool required,
                     std::initializer_list<const char*> allowed) {
    if (!j.contains(key)) {
      if (required) add(path + key, "missing section");
      return nullptr;
    }
    const json& sec = j.at(key);
    if (!sec.is_object()) {
      add(path + key, "must be an object");
      return nullptr;
    }
    for (auto it = sec.begin(); it != sec.end(); ++it) {
      bool known = false;
      for (const char* a : allowed)
        if (it.key() == a) known = true;
      if (!known) add(path + key + "." + it.key(), "unknown key");
    }
    return &sec;
  }

  double number(const json& j, const std::string& path, const char* key,
                double fallback, bool required = false) {
    if (!j.contains(key)) {
      if (required) add(path + key, "missing number");
      return fallback;
    }
    if (!j.at(key).is_number()) {
      add(path + key, "must be a number");
      return fallback;
    }
    return j.at(key).get<double>();
  }

  bool boolean(const json& j, const std::string& path, const char* key,
               bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_boolean()) {
      add(path + key, "must be a boolean");
      return fallback;
    }
    return j.at(key).get<bool>();
  }

  std::string text(const json& j, const std::string& path, const char* key,
                   const std::string& fallback, bool required = false) {
    if (!j.contains(key)) {
      if (required) add(path + key, "missing string");
      return fallback;
    }
    if (!j.at(key).is_string()) {
      add(path + key, "must be a string");
      return fallback;
    }
    return j.at(key).get<std::string>();
  }

  // fixed-length numeric array, e.g. per-component amplitudes
  std::vector<double> pair_array(const json& j, const std::string& path,
                                 const char* key, std::vector<double> fallback) {
    if (!j.contains(key)) return fallback;
    const json& a = j.at(key);
    if (!a.is_array() || a.size() != 2) {
      add(path + key, "must be an array of two numbers");
      return fallback;
    }
    std::vector<double> out;
    for (const auto& v : a) {
      if (!v.is_number()) {
        add(path + key, "must be an array of two numbers");
        return fallback;
      }
      out.push_back(v.get<double>());
    }
    return out;
  }

 private:
  std::vector<std::string> issues_;
};

WaveOperator parse_kernel(const json* sec, const std::string& path,
                          Validator& v) {
  WaveOperator fallback{exponential_kernel()};
  if (!sec) return fallback;
  const std::string family = v.text(*sec, path, "family", "", true);
  if (family == "exponential") {
    return WaveOperator(exponential_kernel());
  } else if (family == "higher_order") {
    const double a = v.number(*sec, path, "a", 1.0, true);
    const double b = v.number(*sec, path, "b", 1.0, true);
    if (a > 0.0 && b > 0.0) return WaveOperator(higher_order_kernel(a, b));
    v.add(path, "higher_order requires a > 0 and b > 0");
  } else if (family == "gaussian") {
    const double w = v.number(*sec, path, "width", 1.0, true);
    if (w > 0.0) return WaveOperator(gaussian_kernel(w));
    v.add(path + "width", "must be positive");
  } else if (family == "mildly_singular") {
    const std::string d = v.text(*sec, path, "descriptor", "exponential");
    if (d == "exponential")
      return WaveOperator(exponential_descriptor());
    v.add(path + "descriptor", "unknown descriptor '" + d + "'");
  } else if (!family.empty()) {
    v.add(path + "family", "unknown kernel family '" + family + "'");
  }
  return fallback;
}

json echo_kernel(const WaveOperator& op) {
  if (op.is_singular())
    return json{{"family", "mildly_singular"}, {"descriptor", "exponential"}};
  const KernelSpec& k = *op.spec();
  switch (k.family) {
    case KernelFamily::Exponential:
      return json{{"family", "exponential"}};
    case KernelFamily::HigherOrder:
      return json{{"family", "higher_order"}, {"a", k.params[0]}, {"b", k.params[1]}};
    case KernelFamily::Gaussian:
      return json{{"family", "gaussian"}, {"width", k.params[0]}};
    default:
      return json{{"family", "custom"}};
  }
}

NonlinearitySpec parse_nonlinearity(const json* sec, const std::string& path,
                                    Validator& v) {
  if (!sec) return zero_nonlinearity();
  const std::string family = v.text(*sec, path, "family", "", true);
  if (family == "zero") return zero_nonlinearity();
  if (family == "quartic") {
    const double k1 = v.number(*sec, path, "kappa1", 0.0, true);
    const double k2 = v.number(*sec, path, "kappa2", 0.0, true);
    return quartic_family(k1, k2);
  }
  if (!family.empty())
    v.add(path + "family", "unknown nonlinearity family '" + family +
                               "' (config families: zero, quartic)");
  return zero_nonlinearity();
}

json echo_nonlinearity(const NonlinearitySpec& nl) {
  if (nl.family == "quartic")
    return json{{"family", "quartic"}, {"kappa1", nl.params[0]}, {"kappa2", nl.params[1]}};
  return json{{"family", "zero"}};
}

RealField parse_inline_field(const json& sec, const char* key,
                             const GridPtr& grid, const std::string& path,
                             Validator& v) {
  if (!sec.contains(key)) return RealField::zeros(grid);
  const json& a = sec.at(key);
  if (!a.is_array() || a.size() != grid->size()) {
    v.add(path + key, "must be an array of grid-size numbers");
    return RealField::zeros(grid);
  }
  std::vector<double> vals;
  vals.reserve(a.size());
  for (const auto& x : a) {
    if (!x.is_number()) {
      v.add(path + key, "must contain numbers only");
      return RealField::zeros(grid);
    }
    vals.push_back(x.get<double>());
  }
  return RealField(grid, std::move(vals));
}

struct ParsedInitial {
  InitialData data;
  json echo;
};

ParsedInitial parse_initial(const json* sec, const GridPtr& requested_grid,
                            const std::string& path, Validator& v) {
  // When the grid section failed, key validation still runs, but data is
  // materialized on a placeholder (the parse raises before it can be used).
  const GridPtr grid =
      requested_grid ? requested_grid : Grid::make(4, 1.0);
  ParsedInitial out{{RealField::zeros(grid), RealField::zeros(grid),
                     RealField::zeros(grid), RealField::zeros(grid)},
                    json{{"preset", "zero"}}};
  if (!sec) return out;
  const std::string preset = v.text(*sec, path, "preset", "", true);
  if (preset == "zero" || preset.empty()) return out;
  if (!requested_grid) return out;

  if (preset == "gaussian") {
    auto pa = v.pair_array(*sec, path, "phi_amplitude", {0.0, 0.0});
    auto va = v.pair_array(*sec, path, "psi_amplitude", {0.0, 0.0});
    const double w = v.number(*sec, path, "width", 2.0);
    const double vw = v.number(*sec, path, "psi_width", w);
    if (!(w > 0.0)) v.add(path + "width", "must be positive");
    if (!(vw > 0.0)) v.add(path + "psi_width", "must be positive");
    if (!v.ok()) return out;
    out.data.u1 = gaussian_bump(grid, pa[0], w);
    out.data.u2 = gaussian_bump(grid, pa[1], w);
    out.data.v1 = gaussian_bump(grid, va[0], vw);
    out.data.v2 = gaussian_bump(grid, va[1], vw);
    out.echo = json{{"preset", "gaussian"},
                    {"phi_amplitude", pa},
                    {"psi_amplitude", va},
                    {"width", w},
                    {"psi_width", vw}};
    return out;
  }
  if (preset == "cosine") {
    auto pa = v.pair_array(*sec, path, "phi_amplitude", {0.0, 0.0});
    auto pm = v.pair_array(*sec, path, "phi_mode", {1.0, 1.0});
    auto va = v.pair_array(*sec, path, "psi_amplitude", {0.0, 0.0});
    auto vm = v.pair_array(*sec, path, "psi_mode", {0.0, 0.0});
    for (const char* key : {"phi_mode", "psi_mode"}) {
      if (!sec->contains(key)) continue;
      for (const auto& x : sec->at(key))
        if (x.is_number() &&
            (x.get<double>() < 0.0 ||
             x.get<double>() != std::floor(x.get<double>())))
          v.add(path + key, "modes must be nonnegative integers");
    }
    if (!v.ok()) return out;
    out.data.u1 = cosine_mode(grid, pa[0], int(pm[0]));
    out.data.u2 = cosine_mode(grid, pa[1], int(pm[1]));
    out.data.v1 = cosine_mode(grid, va[0], int(vm[0]));
    out.data.v2 = cosine_mode(grid, va[1], int(vm[1]));
    out.echo = json{{"preset", "cosine"},
                    {"phi_amplitude", pa},
                    {"phi_mode", {int(pm[0]), int(pm[1])}},
                    {"psi_amplitude", va},
                    {"psi_mode", {int(vm[0]), int(vm[1])}}};
    return out;
  }
  if (preset == "inline") {
    out.data.u1 = parse_inline_field(*sec, "u1", grid, path, v);
    out.data.u2 = parse_inline_field(*sec, "u2", grid, path, v);
    out.data.v1 = parse_inline_field(*sec, "v1", grid, path, v);
    out.data.v2 = parse_inline_field(*sec, "v2", grid, path, v);
    out.echo = json{{"preset", "inline"},
                    {"u1", out.data.u1.values()},
                    {"u2", out.data.u2.values()},
                    {"v1", out.data.v1.values()},
                    {"v2", out.data.v2.values()}};
    return out;
  }
  v.add(path + "preset", "unknown initial-data preset '" + preset +
                             "' (zero, gaussian, cosine, inline)");
  return out;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Completed:
      return "completed";
    case Outcome::BlowupDetected:
      return "blowup_detected";
    default:
      return "corrupted";
  }
}

const char* status_name(CertificateStatus s) {
  switch (s) {
    case CertificateStatus::NegativeEnergy:
      return "negative_energy";
    case CertificateStatus::PositiveEnergy:
      return "positive_energy";
    default:
      return "not_certified";
  }
}

json report_of(const HypothesisReport& r) {
  return json{{"predicate", r.predicate},
              {"pass", r.pass},
              {"worst_margin", r.worst_margin},
              {"worst_at", {r.worst_u1, r.worst_u2}},
              {"tolerance", r.tolerance},
              {"box", {r.box.u1_lo, r.box.u1_hi, r.box.u2_lo, r.box.u2_hi}},
              {"samples_per_axis", r.samples_per_axis}};
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

ExperimentConfig parse_config(const json& doc) {
  Validator v;
  if (!doc.is_object()) {
    v.add("$", "config must be a JSON object");
    v.raise_if_failed();
  }
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    static const char* sections[] = {"grid",      "kernel1",     "kernel2",
                                     "nonlinearity", "initial",  "evolution",
                                     "diagnostics",  "output"};
    bool known = false;
    for (const char* s : sections)
      if (it.key() == s) known = true;
    if (!known) v.add(it.key(), "unknown section");
  }

  // grid
  const json* gsec =
      v.object(doc, "", "grid", true, {"n", "period", "period_pi"});
  std::size_t n = 0;
  double period = 0.0;
  if (gsec) {
    const double nd = v.number(*gsec, "grid.", "n", 0.0, true);
    if (nd < 4.0 || nd != std::floor(nd))
      v.add("grid.n", "must be an integer power of two >= 4");
    else
      n = std::size_t(nd);
    const bool has_p = gsec->contains("period");
    const bool has_pp = gsec->contains("period_pi");
    if (has_p == has_pp) {
      v.add("grid", "exactly one of period, period_pi is required");
    } else if (has_p) {
      period = v.number(*gsec, "grid.", "period", 0.0);
    } else {
      period = v.number(*gsec, "grid.", "period_pi", 0.0) * std::numbers::pi;
    }
    if (!(period > 0.0)) v.add("grid", "period must be positive");
  }
  GridPtr grid;
  if (n >= 4 && period > 0.0) {
    try {
      grid = Grid::make(n, period);
    } catch (const std::invalid_argument& e) {
      v.add("grid", e.what());
    }
  }

  // kernels & nonlinearity
  static const std::initializer_list<const char*> kernel_keys = {
      "family", "a", "b", "width", "descriptor"};
  WaveOperator k1 =
      parse_kernel(v.object(doc, "", "kernel1", true, kernel_keys), "kernel1.", v);
  WaveOperator k2 =
      parse_kernel(v.object(doc, "", "kernel2", true, kernel_keys), "kernel2.", v);
  NonlinearitySpec nl = parse_nonlinearity(
      v.object(doc, "", "nonlinearity", true, {"family", "kappa1", "kappa2"}),
      "nonlinearity.", v);

  // initial data; omitted section means zero data
  ParsedInitial init = parse_initial(
      v.object(doc, "", "initial", false,
               {"preset", "phi_amplitude", "phi_mode", "psi_amplitude",
                "psi_mode", "width", "psi_width", "u1", "u2", "v1", "v2"}),
      grid, "initial.", v);

  // evolution
  const json* esec = v.object(doc, "", "evolution", true,
                              {"dt", "t_end", "blowup_threshold",
                               "observer_stride", "dealias"});
  EvolutionConfig evo;
  if (esec) {
    evo.dt = v.number(*esec, "evolution.", "dt", 0.0, true);
    evo.t_end = v.number(*esec, "evolution.", "t_end", 0.0, true);
    evo.blowup_threshold =
        v.number(*esec, "evolution.", "blowup_threshold", 1e6);
    const double stride = v.number(*esec, "evolution.", "observer_stride", 1.0);
    evo.dealias = v.boolean(*esec, "evolution.", "dealias", false);
    if (!(evo.dt > 0.0)) v.add("evolution.dt", "must be positive");
    if (!(evo.t_end >= 0.0)) v.add("evolution.t_end", "must be nonnegative");
    if (!(evo.blowup_threshold > 0.0))
      v.add("evolution.blowup_threshold", "must be positive");
    if (stride < 1.0 || stride != std::floor(stride))
      v.add("evolution.observer_stride", "must be a positive integer");
    else
      evo.observer_stride = std::size_t(stride);
    if (evo.dt > 0.0 && evo.t_end >= 0.0) {
      const double k = std::round(evo.t_end / evo.dt);
      if (std::fabs(k * evo.dt - evo.t_end) > 1e-9 * std::max(1.0, evo.t_end))
        v.add("evolution.t_end", "must be an integer multiple of dt");
    }
  }

  // diagnostics
  DiagnosticsOptions diag;
  const json* dsec = v.object(doc, "", "diagnostics", false,
                              {"energy", "linear_reference", "certificate",
                               "potential_bound", "power_bound"});
  if (dsec) {
    diag.energy = v.boolean(*dsec, "diagnostics.", "energy", true);
    diag.linear_reference =
        v.boolean(*dsec, "diagnostics.", "linear_reference", false);
    if (const json* c = v.object(*dsec, "diagnostics.", "certificate", false,
                                 {"nu", "growth_box"})) {
      CertificateOptions co;
      co.nu = v.number(*c, "diagnostics.certificate.", "nu", 0.5);
      co.growth_box = v.number(*c, "diagnostics.certificate.", "growth_box", 3.0);
      if (!(co.nu > 0.0)) v.add("diagnostics.certificate.nu", "must be positive");
      if (!(co.growth_box > 0.0))
        v.add("diagnostics.certificate.growth_box", "must be positive");
      diag.certificate = co;
    }
    if (const json* p = v.object(*dsec, "diagnostics.", "potential_bound", false,
                                 {"k", "box"})) {
      PotentialBoundOptions po;
      po.k = v.number(*p, "diagnostics.potential_bound.", "k", 0.0);
      po.box = v.number(*p, "diagnostics.potential_bound.", "box", 3.0);
      if (po.k < 0.0) v.add("diagnostics.potential_bound.k", "must be >= 0");
      if (!(po.box > 0.0))
        v.add("diagnostics.potential_bound.box", "must be positive");
      diag.potential_bound = po;
    }
    if (const json* p = v.object(*dsec, "diagnostics.", "power_bound", false,
                                 {"c", "k", "q1", "q2", "box"})) {
      PowerBoundOptions po;
      po.c = v.number(*p, "diagnostics.power_bound.", "c", 4.0);
      po.k = v.number(*p, "diagnostics.power_bound.", "k", 0.0);
      po.q1 = v.number(*p, "diagnostics.power_bound.", "q1", 4.0 / 3.0);
      po.q2 = v.number(*p, "diagnostics.power_bound.", "q2", po.q1);
      po.box = v.number(*p, "diagnostics.power_bound.", "box", 3.0);
      if (!(po.c > 0.0)) v.add("diagnostics.power_bound.c", "must be positive");
      if (po.k < 0.0) v.add("diagnostics.power_bound.k", "must be >= 0");
      if (!(po.q1 > 1.0) || !(po.q2 > 1.0))
        v.add("diagnostics.power_bound", "q1 and q2 must exceed 1");
      if (!(po.box > 0.0)) v.add("diagnostics.power_bound.box", "must be positive");
      diag.power_bound = po;
    }
  }

  OutputOptions out;
  if (const json* osec = v.object(doc, "", "output", false, {"csv", "report"})) {
    out.csv = v.text(*osec, "output.", "csv", out.csv);
    out.report = v.text(*osec, "output.", "report", out.report);
  }

  v.raise_if_failed();

  // resolved echo
  json resolved;
  resolved["grid"] = json{{"n", n}, {"period", period}};
  resolved["kernel1"] = echo_kernel(k1);
  resolved["kernel2"] = echo_kernel(k2);
  resolved["nonlinearity"] = echo_nonlinearity(nl);
  resolved["initial"] = init.echo;
  resolved["evolution"] = json{{"dt", evo.dt},
                               {"t_end", evo.t_end},
                               {"blowup_threshold", evo.blowup_threshold},
                               {"observer_stride", evo.observer_stride},
                               {"dealias", evo.dealias}};
  json dj{{"energy", diag.energy}, {"linear_reference", diag.linear_reference}};
  if (diag.certificate)
    dj["certificate"] = json{{"nu", diag.certificate->nu},
                             {"growth_box", diag.certificate->growth_box}};
  if (diag.potential_bound)
    dj["potential_bound"] = json{{"k", diag.potential_bound->k},
                                 {"box", diag.potential_bound->box}};
  if (diag.power_bound)
    dj["power_bound"] = json{{"c", diag.power_bound->c},
                             {"k", diag.power_bound->k},
                             {"q1", diag.power_bound->q1},
                             {"q2", diag.power_bound->q2},
                             {"box", diag.power_bound->box}};
  resolved["diagnostics"] = dj;
  resolved["output"] = json{{"csv", out.csv}, {"report", out.report}};

  return ExperimentConfig{grid,         k1,  k2,  nl, std::move(init.data),
                          evo,          diag, out, std::move(resolved)};
}

ExperimentConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("not valid JSON: ") + e.what()});
  }
  return parse_config(doc);
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError({"override '" + assignment + "' is not key=value"});
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);

  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;  // bare strings stay strings
  }

  json* node = &doc;
  std::size_t pos = 0;
  while (true) {
    const auto dot = path.find('.', pos);
    const std::string key = path.substr(pos, dot - pos);
    if (key.empty())
      throw ConfigError({"override path '" + path + "' has an empty segment"});
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    pos = dot + 1;
  }
}

int exit_code_for(Outcome outcome) {
  switch (outcome) {
    case Outcome::Completed:
      return 0;
    case Outcome::BlowupDetected:
      return 2;
    default:
      return 3;
  }
}

RunReport run_scenario(const ExperimentConfig& cfg) {
  const auto wall_start = std::chrono::steady_clock::now();

  // hypothesis checks first; they are part of the report either way
  std::vector<HypothesisReport> hyp;
  if (cfg.diagnostics.certificate) {
    hyp.push_back(check_growth_condition(
        cfg.nonlinearity, cfg.diagnostics.certificate->nu,
        Box::symmetric(cfg.diagnostics.certificate->growth_box)));
  }
  if (cfg.diagnostics.potential_bound) {
    hyp.push_back(check_potential_lower_bound(
        cfg.nonlinearity, cfg.diagnostics.potential_bound->k,
        Box::symmetric(cfg.diagnostics.potential_bound->box)));
  }
  if (cfg.diagnostics.power_bound) {
    const auto& p = *cfg.diagnostics.power_bound;
    hyp.push_back(check_gradient_power_bound(cfg.nonlinearity, p.c, p.k, p.q1,
                                             p.q2, Box::symmetric(p.box)));
  }

  std::optional<BlowupCertificate> cert;
  if (cfg.diagnostics.certificate) {
    cert = build_certificate(cfg.initial, cfg.diagnostics.certificate->nu,
                             cfg.kernel1, cfg.kernel2, cfg.nonlinearity);
  }

  SimulationResult sim = integrate(cfg.initial, cfg.evolution, cfg.kernel1,
                                   cfg.kernel2, cfg.nonlinearity);

  // CSV columns: t, E_total, kinetic1, kinetic2, potential, sup_u1, sup_u2,
  // then Phi when certified and err_linear when requested.
  const bool with_phi =
      cert && cert->status != CertificateStatus::NotCertified;
  std::vector<double> phi;
  if (with_phi) phi = phi_series(sim, *cert, cfg.kernel1, cfg.kernel2);

  std::ofstream csv(cfg.output.csv, std::ios::binary);
  if (!csv) throw IoError("cannot open CSV output '" + cfg.output.csv + "'");
  csv << "t";
  if (cfg.diagnostics.energy) csv << ",E_total,kinetic1,kinetic2,potential";
  csv << ",sup_u1,sup_u2";
  if (with_phi) csv << ",Phi";
  if (cfg.diagnostics.linear_reference) csv << ",err_linear";
  csv << "\n";

  double max_drift = 0.0, e0 = 0.0, max_err_linear = 0.0;
  double max_sup = 0.0;
  for (std::size_t i = 0; i < sim.snapshots.size(); ++i) {
    const Snapshot& s = sim.snapshots[i];
    max_sup = std::max(max_sup, std::max(s.sup_u1, s.sup_u2));
    csv << fmt17(s.t);
    if (cfg.diagnostics.energy) {
      const EnergyBreakdown eb = energy(State{s.t, s.u1, s.u2, s.v1, s.v2},
                                        cfg.kernel1, cfg.kernel2,
                                        cfg.nonlinearity);
      if (i == 0) e0 = eb.total;
      max_drift = std::max(
          max_drift, std::fabs(eb.total - e0) / std::max(1.0, std::fabs(e0)));
      csv << ',' << fmt17(eb.total) << ',' << fmt17(eb.kinetic1) << ','
          << fmt17(eb.kinetic2) << ',' << fmt17(eb.potential);
    }
    csv << ',' << fmt17(s.sup_u1) << ',' << fmt17(s.sup_u2);
    if (with_phi) csv << ',' << fmt17(phi[i]);
    if (cfg.diagnostics.linear_reference) {
      State ex = linear_exact(cfg.initial, cfg.kernel1, cfg.kernel2, s.t);
      double err = 0.0;
      for (std::size_t j = 0; j < s.u1.size(); ++j) {
        err = std::max(err, std::fabs(s.u1[j] - ex.u1[j]));
        err = std::max(err, std::fabs(s.u2[j] - ex.u2[j]));
      }
      max_err_linear = std::max(max_err_linear, err);
      csv << ',' << fmt17(err);
    }
    csv << "\n";
  }
  csv.flush();
  if (!csv) throw IoError("failed writing CSV output '" + cfg.output.csv + "'");
  csv.close();

  // post-hoc: the hypothesis boxes must cover the range the run visited
  // (states before the guard tripped)
  double visited = 0.0;
  for (const Snapshot& s : sim.snapshots) {
    if (sim.outcome == Outcome::BlowupDetected && s.t > sim.bracket_lo) continue;
    visited = std::max(visited, std::max(s.sup_u1, s.sup_u2));
  }

  json rj;
  rj["version"] = std::string(library_version);
  rj["config"] = cfg.resolved;
  json oj{{"status", outcome_name(sim.outcome)}, {"steps", sim.steps}};
  if (sim.outcome == Outcome::BlowupDetected) {
    oj["t_detect"] = sim.detect_time;
    oj["bracket"] = {sim.bracket_lo, sim.bracket_hi};
  }
  rj["outcome"] = oj;
  if (cfg.diagnostics.energy && !sim.snapshots.empty()) {
    rj["energy"] = json{{"initial", e0}, {"max_relative_drift", max_drift}};
  }
  if (cert) {
    rj["certificate"] = json{{"status", status_name(cert->status)},
                             {"nu", cert->nu},
                             {"b", cert->b},
                             {"t0", cert->t0},
                             {"pairing", cert->pairing},
                             {"displacement", cert->displacement},
                             {"initial_energy", cert->initial_energy},
                             {"phi0", cert->phi0},
                             {"dphi0", cert->dphi0},
                             {"levine_bound", cert->levine_bound}};
  }
  json hj = json::array();
  for (const auto& h : hyp) {
    json one = report_of(h);
    // a symmetric box covers the visited range iff its half-width does
    one["covers_visited_range"] = h.box.u1_hi >= visited;
    hj.push_back(one);
  }
  rj["hypothesis_reports"] = hj;
  if (cfg.diagnostics.linear_reference)
    rj["max_err_linear"] = max_err_linear;
  rj["outputs"] = json{{"csv", cfg.output.csv}, {"report", cfg.output.report}};
  const auto wall_end = std::chrono::steady_clock::now();
  rj["timing_ms"] =
      std::chrono::duration<double, std::milli>(wall_end - wall_start).count();

  RunReport rep;
  rep.outcome = sim.outcome;
  rep.exit_code = exit_code_for(sim.outcome);
  rj["exit_code"] = rep.exit_code;
  rep.document = std::move(rj);

  std::ofstream rf(cfg.output.report, std::ios::binary);
  if (!rf)
    throw IoError("cannot open report output '" + cfg.output.report + "'");
  rf << rep.document.dump(2) << "\n";
  rf.flush();
  if (!rf)
    throw IoError("failed writing report output '" + cfg.output.report + "'");
  return rep;
}

}  // namespace nlwave
