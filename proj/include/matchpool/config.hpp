#ifndef MATCHPOOL_CONFIG_HPP
#define MATCHPOOL_CONFIG_HPP

#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "matchpool/policy.hpp"
#include "matchpool/statics.hpp"
#include "matchpool/twopop.hpp"

// Scenario files: flat `key = value` lines with dotted section prefixes
// (economy.*, intervention.*, sweep.*, twopop.*, solver.*, verify.*).
// Blank lines and #-comments are ignored; unknown and duplicate keys are
// rejected with the offending key and line number.

namespace matchpool {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverOptions {
  double tol = 1e-10;
  std::size_t grid_points = 10000;
  std::uint64_t seed = 20240101;
};

struct SweepSpec {
  Primitive primitive = Primitive::ThetaL;
  double from = 0.0;
  double to = 0.0;
  std::size_t steps = 1;  // number of grid points, inclusive of both ends
};

struct ScenarioConfig {
  std::optional<ModelParams> economy;
  std::optional<Intervention> intervention;
  std::optional<SweepSpec> sweep;
  std::optional<TwoPopParams> twopop;
  SolverOptions solver;
  std::optional<std::size_t> verify_samples;
};

namespace config_detail {

struct RawEntry {
  std::string value;
  int line = 0;
};

using RawMap = std::map<std::string, RawEntry>;

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return std::string();
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] inline void fail(const std::string& key, int line,
                              const std::string& what) {
  std::ostringstream msg;
  msg << "config error";
  if (line > 0) msg << " (line " << line << ")";
  if (!key.empty()) msg << " key '" << key << "'";
  msg << ": " << what;
  throw ConfigError(msg.str());
}

inline double parse_number(const std::string& key, const RawEntry& e) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(e.value.c_str(), &end);
  if (end == e.value.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v))
    fail(key, e.line, "expected a finite number, got '" + e.value + "'");
  return v;
}

inline std::uint64_t parse_unsigned(const std::string& key, const RawEntry& e) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(e.value.c_str(), &end, 10);
  if (end == e.value.c_str() || *end != '\0' || errno == ERANGE ||
      e.value.find('-') != std::string::npos)
    fail(key, e.line, "expected a nonnegative integer, got '" + e.value + "'");
  return static_cast<std::uint64_t>(v);
}

inline bool known_key(const std::string& k) {
  static const char* const keys[] = {
      "economy.alpha_H",      "economy.alpha_L",      "economy.Y_H",
      "economy.Y_L",          "economy.theta_H",      "economy.theta_L",
      "economy.psi",          "intervention.kind",    "intervention.dtheta_H",
      "intervention.dtheta_L", "intervention.factor", "intervention.dY_H",
      "intervention.dY_L",    "intervention.psi_factor", "sweep.primitive",
      "sweep.from",           "sweep.to",             "sweep.steps",
      "twopop.beta_f",        "twopop.beta_m",        "solver.tol",
      "solver.grid_points",   "solver.seed",          "verify.samples"};
  for (const char* key : keys)
    if (k == key) return true;
  for (const char* pop : {"twopop.f.", "twopop.m."}) {
    if (k.rfind(pop, 0) != 0) continue;
    const std::string field = k.substr(std::string(pop).size());
    for (const char* f :
         {"alpha_H", "alpha_L", "Y_H", "Y_L", "theta_H", "theta_L", "psi"})
      if (field == f) return true;
  }
  return false;
}

inline RawMap read_raw(std::istream& in) {
  RawMap raw;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("", lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail("", lineno, "empty key");
    if (value.empty()) fail(key, lineno, "empty value");
    if (!known_key(key)) fail(key, lineno, "unknown key");
    if (raw.count(key))
      fail(key, lineno, "duplicate key (first seen on line " +
                            std::to_string(raw[key].line) + ")");
    raw[key] = RawEntry{value, lineno};
  }
  return raw;
}

inline bool block_present(const RawMap& raw, const std::string& prefix) {
  for (const auto& [k, v] : raw)
    if (k.rfind(prefix, 0) == 0) return true;
  return false;
}

inline const RawEntry& require(const RawMap& raw, const std::string& key) {
  const auto it = raw.find(key);
  if (it == raw.end()) fail(key, 0, "required key missing");
  return it->second;
}

inline ModelParams read_economy(const RawMap& raw, const std::string& prefix) {
  ModelParams p;
  p.alpha_H = parse_number(prefix + "alpha_H", require(raw, prefix + "alpha_H"));
  p.alpha_L = parse_number(prefix + "alpha_L", require(raw, prefix + "alpha_L"));
  p.Y_H = parse_number(prefix + "Y_H", require(raw, prefix + "Y_H"));
  p.Y_L = parse_number(prefix + "Y_L", require(raw, prefix + "Y_L"));
  p.theta_H = parse_number(prefix + "theta_H", require(raw, prefix + "theta_H"));
  p.theta_L = parse_number(prefix + "theta_L", require(raw, prefix + "theta_L"));
  p.psi = parse_number(prefix + "psi", require(raw, prefix + "psi"));
  return p;
}

inline Primitive parse_primitive(const std::string& key, const RawEntry& e) {
  for (Primitive which : kAllPrimitives)
    if (e.value == to_string(which)) return which;
  fail(key, e.line, "unknown primitive '" + e.value + "'");
}

inline void forbid(const RawMap& raw, const std::string& key,
                   const std::string& kind) {
  const auto it = raw.find(key);
  if (it != raw.end())
    fail(key, it->second.line, "key does not apply to intervention kind '" + kind + "'");
}

inline Intervention read_intervention(const RawMap& raw) {
  const RawEntry& kind = require(raw, "intervention.kind");
  if (kind.value == "abstinence") {
    for (const char* k : {"intervention.factor", "intervention.dY_H",
                          "intervention.dY_L", "intervention.psi_factor"})
      forbid(raw, k, kind.value);
    Abstinence ab;
    ab.dtheta_H = parse_number("intervention.dtheta_H",
                               require(raw, "intervention.dtheta_H"));
    ab.dtheta_L = parse_number("intervention.dtheta_L",
                               require(raw, "intervention.dtheta_L"));
    return ab;
  }
  if (kind.value == "treatment_factor") {
    for (const char* k : {"intervention.dtheta_H", "intervention.dtheta_L",
                          "intervention.dY_H", "intervention.dY_L",
                          "intervention.psi_factor"})
      forbid(raw, k, kind.value);
    TreatmentFactor tf;
    tf.factor = parse_number("intervention.factor", require(raw, "intervention.factor"));
    return tf;
  }
  if (kind.value == "treatment_shift") {
    for (const char* k : {"intervention.dtheta_H", "intervention.dtheta_L",
                          "intervention.factor", "intervention.psi_factor"})
      forbid(raw, k, kind.value);
    TreatmentShift ts;
    ts.dY_H = parse_number("intervention.dY_H", require(raw, "intervention.dY_H"));
    ts.dY_L = parse_number("intervention.dY_L", require(raw, "intervention.dY_L"));
    return ts;
  }
  if (kind.value == "satiation") {
    for (const char* k : {"intervention.dtheta_H", "intervention.dtheta_L",
                          "intervention.factor", "intervention.dY_H",
                          "intervention.dY_L"})
      forbid(raw, k, kind.value);
    Satiation sa;
    sa.factor = parse_number("intervention.psi_factor",
                             require(raw, "intervention.psi_factor"));
    return sa;
  }
  fail("intervention.kind", kind.line,
       "expected abstinence | treatment_factor | treatment_shift | satiation");
}

}  // namespace config_detail

inline ScenarioConfig parse_scenario(std::istream& in) {
  using namespace config_detail;
  const RawMap raw = read_raw(in);
  ScenarioConfig cfg;

  if (block_present(raw, "economy.")) {
    cfg.economy = read_economy(raw, "economy.");
    const std::string why = describe_invalid(*cfg.economy);
    if (!why.empty()) fail("economy", 0, why);
  }
  if (block_present(raw, "intervention.")) cfg.intervention = read_intervention(raw);
  if (block_present(raw, "sweep.")) {
    SweepSpec sweep;
    sweep.primitive = parse_primitive("sweep.primitive", require(raw, "sweep.primitive"));
    sweep.from = parse_number("sweep.from", require(raw, "sweep.from"));
    sweep.to = parse_number("sweep.to", require(raw, "sweep.to"));
    sweep.steps = static_cast<std::size_t>(
        parse_unsigned("sweep.steps", require(raw, "sweep.steps")));
    if (sweep.steps < 1) fail("sweep.steps", 0, "must be >= 1");
    cfg.sweep = sweep;
  }
  if (block_present(raw, "twopop.")) {
    TwoPopParams tp;
    tp.f = read_economy(raw, "twopop.f.");
    tp.m = read_economy(raw, "twopop.m.");
    tp.beta_f = parse_number("twopop.beta_f", require(raw, "twopop.beta_f"));
    tp.beta_m = parse_number("twopop.beta_m", require(raw, "twopop.beta_m"));
    const std::string why = describe_invalid(tp);
    if (!why.empty()) fail("twopop", 0, why);
    cfg.twopop = tp;
  }
  if (raw.count("solver.tol"))
    cfg.solver.tol = parse_number("solver.tol", raw.at("solver.tol"));
  if (raw.count("solver.grid_points"))
    cfg.solver.grid_points = static_cast<std::size_t>(
        parse_unsigned("solver.grid_points", raw.at("solver.grid_points")));
  if (raw.count("solver.seed"))
    cfg.solver.seed = parse_unsigned("solver.seed", raw.at("solver.seed"));
  if (raw.count("verify.samples"))
    cfg.verify_samples = static_cast<std::size_t>(
        parse_unsigned("verify.samples", raw.at("verify.samples")));
  return cfg;
}

inline ScenarioConfig parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config error: cannot open '" + path + "'");
  return parse_scenario(in);
}

// Renders an economy in config syntax; used to print counterexamples in
// a form that feeds straight back into the tool.
inline std::string to_config_text(const ModelParams& p) {
  std::ostringstream out;
  out.precision(17);
  out << "economy.alpha_H = " << p.alpha_H << "\n"
      << "economy.alpha_L = " << p.alpha_L << "\n"
      << "economy.Y_H = " << p.Y_H << "\n"
      << "economy.Y_L = " << p.Y_L << "\n"
      << "economy.theta_H = " << p.theta_H << "\n"
      << "economy.theta_L = " << p.theta_L << "\n"
      << "economy.psi = " << p.psi << "\n";
  return out.str();
}

}  // namespace matchpool

#endif  // MATCHPOOL_CONFIG_HPP
