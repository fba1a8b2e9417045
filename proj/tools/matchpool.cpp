// Command-line front end: solve | sweep | policy | twopop | verify, all
// driven by flat key-value scenario files. CSV output is deterministic;
// floats carry 17 significant digits.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "matchpool/config.hpp"
#include "matchpool/csv.hpp"
#include "matchpool/policy.hpp"
#include "matchpool/sampler.hpp"
#include "matchpool/solver.hpp"
#include "matchpool/statics.hpp"
#include "matchpool/twopop.hpp"
#include "matchpool/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitSolverError = 3;

struct CliOptions {
  std::string config_path;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::string format = "csv";
};

using matchpool::ConfigError;
using matchpool::ScenarioConfig;

void require_blocks(const ScenarioConfig& cfg, bool economy, bool intervention,
                    bool sweep, bool twopop, const std::string& command) {
  const auto check = [&command](bool want, bool have, const char* block) {
    if (want && !have)
      throw ConfigError("config error: command '" + command + "' requires the " +
                        block + " block");
    if (!want && have)
      throw ConfigError("config error: command '" + command +
                        "' does not accept the " + std::string(block) + " block");
  };
  check(economy, cfg.economy.has_value(), "economy");
  check(intervention, cfg.intervention.has_value(), "intervention");
  check(sweep, cfg.sweep.has_value(), "sweep");
  check(twopop, cfg.twopop.has_value(), "twopop");
}

void emit_equilibrium_summary(std::ostream& out, const matchpool::EquilibriumSet& set) {
  const matchpool::Equilibrium& focal = matchpool::pareto_dominant(set);
  out << "regime: " << matchpool::to_string(set.regime.tag) << "\n";
  out << "equilibria: " << set.equilibria.size() << "\n";
  for (const matchpool::Equilibrium& eq : set.equilibria) {
    out << "  W* = " << matchpool::fmt_double(eq.W_star)
        << "  i = (" << matchpool::fmt_double(eq.i_H) << ", "
        << matchpool::fmt_double(eq.i_L) << ")  pi = ("
        << matchpool::fmt_double(eq.pi_H) << ", " << matchpool::fmt_double(eq.pi_L)
        << ")  " << matchpool::to_string(eq.activity) << ", "
        << matchpool::to_string(eq.stability)
        << (eq.W_star == focal.W_star ? "  [pareto-dominant]" : "") << "\n";
  }
}

void emit_equilibrium_csv(std::ostream& out, const matchpool::EquilibriumSet& set,
                          bool header) {
  const matchpool::Equilibrium& focal = matchpool::pareto_dominant(set);
  if (header) out << matchpool::result_row_header() << "\n";
  for (const matchpool::Equilibrium& eq : set.equilibria)
    out << matchpool::result_row(set.economy, eq, set.regime.tag,
                                 eq.W_star == focal.W_star)
        << "\n";
}

int cmd_solve(const ScenarioConfig& cfg, const CliOptions& opt, std::ostream& out) {
  require_blocks(cfg, true, false, false, false, "solve");
  const double tol = opt.tol.value_or(cfg.solver.tol);
  const matchpool::EquilibriumSet set =
      matchpool::find_equilibria(*cfg.economy, tol, cfg.solver.grid_points);
  if (opt.format == "summary")
    emit_equilibrium_summary(out, set);
  else
    emit_equilibrium_csv(out, set, true);
  return kExitOk;
}

int cmd_sweep(const ScenarioConfig& cfg, const CliOptions& opt, std::ostream& out) {
  require_blocks(cfg, true, false, true, false, "sweep");
  const double tol = opt.tol.value_or(cfg.solver.tol);
  const matchpool::SweepSpec& sweep = *cfg.sweep;

  std::vector<double> values;
  for (std::size_t k = 0; k < sweep.steps; ++k) {
    const double t = sweep.steps == 1
                         ? 0.0
                         : static_cast<double>(k) / static_cast<double>(sweep.steps - 1);
    values.push_back(sweep.from + t * (sweep.to - sweep.from));
  }
  const double step_size =
      sweep.steps > 1 ? std::fabs(values[1] - values[0]) : 0.0;
  const double radius = std::max(0.03, 5.0 * step_size);

  std::vector<matchpool::TransitionRecord> events;
  std::optional<matchpool::EquilibriumSet> prev;
  if (opt.format != "summary") out << matchpool::result_row_header() << "\n";
  for (double v : values) {
    const matchpool::ModelParams p =
        matchpool::with_primitive(*cfg.economy, sweep.primitive, v);
    matchpool::validate(p);
    matchpool::EquilibriumSet set;
    try {
      set = matchpool::find_equilibria(p, tol, cfg.solver.grid_points);
    } catch (const matchpool::SolverError& err) {
      std::cerr << "sweep point " << matchpool::to_string(sweep.primitive) << " = "
                << matchpool::fmt_double(v) << " skipped: " << err.what() << "\n";
      prev.reset();
      continue;
    }
    if (opt.format == "summary") {
      out << matchpool::to_string(sweep.primitive) << " = "
          << matchpool::fmt_double(v) << "\n";
      emit_equilibrium_summary(out, set);
    } else {
      emit_equilibrium_csv(out, set, false);
    }
    if (prev)
      matchpool::detail::diff_events(*prev, set, v, radius, events);
    prev = std::move(set);
  }

  out << "\n" << "event_param_value,event" << "\n";
  for (const matchpool::TransitionRecord& rec : events)
    out << matchpool::fmt_double(rec.param_value) << ','
        << matchpool::to_string(rec.event) << "\n";
  return kExitOk;
}

int cmd_policy(const ScenarioConfig& cfg, const CliOptions& opt, std::ostream& out) {
  require_blocks(cfg, true, true, false, false, "policy");
  const matchpool::PolicyReport rep = matchpool::compare(*cfg.economy, *cfg.intervention);

  const auto kv = [&out](const char* key, const std::string& value) {
    out << key << ',' << value << "\n";
  };
  if (opt.format == "summary") {
    out << "intervention: " << matchpool::kind_name(*cfg.intervention) << "\n";
    out << "focal W*: " << matchpool::fmt_double(rep.focal_before.W_star) << " -> "
        << matchpool::fmt_double(rep.focal_after.W_star)
        << " (delta " << matchpool::fmt_double(rep.delta_W) << ")\n";
    out << "focal i_H: " << matchpool::fmt_double(rep.focal_before.i_H) << " -> "
        << matchpool::fmt_double(rep.focal_after.i_H) << "\n";
    out << "focal i_L: " << matchpool::fmt_double(rep.focal_before.i_L) << " -> "
        << matchpool::fmt_double(rep.focal_after.i_L) << "\n";
    out << "pi_H: " << matchpool::fmt_double(rep.focal_before.pi_H) << " -> "
        << matchpool::fmt_double(rep.payoff_new_utility.H)
        << " (at old utility " << matchpool::fmt_double(rep.payoff_old_utility.H)
        << ")\n";
    out << "pi_L: " << matchpool::fmt_double(rep.focal_before.pi_L) << " -> "
        << matchpool::fmt_double(rep.payoff_new_utility.L)
        << " (at old utility " << matchpool::fmt_double(rep.payoff_old_utility.L)
        << ")\n";
    out << "revealed-preference chain: H "
        << (rep.chain_holds_H ? "holds" : "violated") << ", L "
        << (rep.chain_holds_L ? "holds" : "violated") << "\n";
  } else {
    out << "key,value" << "\n";
    kv("intervention", matchpool::kind_name(*cfg.intervention));
    kv("W_star_before", matchpool::fmt_double(rep.focal_before.W_star));
    kv("W_star_after", matchpool::fmt_double(rep.focal_after.W_star));
    kv("delta_W", matchpool::fmt_double(rep.delta_W));
    kv("i_H_before", matchpool::fmt_double(rep.focal_before.i_H));
    kv("i_H_after", matchpool::fmt_double(rep.focal_after.i_H));
    kv("i_L_before", matchpool::fmt_double(rep.focal_before.i_L));
    kv("i_L_after", matchpool::fmt_double(rep.focal_after.i_L));
    kv("pi_H_before", matchpool::fmt_double(rep.focal_before.pi_H));
    kv("pi_H_after", matchpool::fmt_double(rep.payoff_new_utility.H));
    kv("pi_H_after_old_utility", matchpool::fmt_double(rep.payoff_old_utility.H));
    kv("pi_L_before", matchpool::fmt_double(rep.focal_before.pi_L));
    kv("pi_L_after", matchpool::fmt_double(rep.payoff_new_utility.L));
    kv("pi_L_after_old_utility", matchpool::fmt_double(rep.payoff_old_utility.L));
    kv("chain_holds_H", rep.chain_holds_H ? "1" : "0");
    kv("chain_holds_L", rep.chain_holds_L ? "1" : "0");
  }

  const auto* ab = std::get_if<matchpool::Abstinence>(&*cfg.intervention);
  if (ab != nullptr && ab->dtheta_H <= 0.0 && ab->dtheta_L <= 0.0) {
    const matchpool::CompensationLedger led =
        matchpool::slutsky_ledger(*cfg.economy, *ab);
    if (opt.format == "summary") {
      out << "compensation H: " << matchpool::fmt_double(led.compensation.H)
          << " -> compensated payoff "
          << matchpool::fmt_double(led.compensated_payoff.H) << " vs baseline "
          << matchpool::fmt_double(led.baseline_payoff.H) << " ("
          << (led.sufficient_H ? "sufficient" : "insufficient") << ")\n";
      out << "compensation L: " << matchpool::fmt_double(led.compensation.L)
          << " -> compensated payoff "
          << matchpool::fmt_double(led.compensated_payoff.L) << " vs baseline "
          << matchpool::fmt_double(led.baseline_payoff.L) << " ("
          << (led.sufficient_L ? "sufficient" : "insufficient") << ")\n";
    } else {
      kv("compensation_H", matchpool::fmt_double(led.compensation.H));
      kv("compensation_L", matchpool::fmt_double(led.compensation.L));
      kv("compensated_payoff_H", matchpool::fmt_double(led.compensated_payoff.H));
      kv("compensated_payoff_L", matchpool::fmt_double(led.compensated_payoff.L));
      kv("compensation_sufficient_H", led.sufficient_H ? "1" : "0");
      kv("compensation_sufficient_L", led.sufficient_L ? "1" : "0");
    }
  }
  return kExitOk;
}

int cmd_twopop(const ScenarioConfig& cfg, const CliOptions& opt, std::ostream& out) {
  require_blocks(cfg, false, false, false, true, "twopop");
  const double tol = opt.tol.value_or(cfg.solver.tol);
  const matchpool::TwoPopSolution sol = matchpool::solve_two_pop(*cfg.twopop, tol);
  if (opt.format == "summary") {
    out << "equilibria: " << sol.equilibria.size() << " (seeds "
        << sol.diagnostics.seeds_total << ", discarded "
        << sol.diagnostics.seeds_discarded << ")\n";
    for (const matchpool::TwoPopEquilibrium& eq : sol.equilibria)
      out << "  W = (" << matchpool::fmt_double(eq.W_f) << ", "
          << matchpool::fmt_double(eq.W_m) << ")  i_f = ("
          << matchpool::fmt_double(eq.i_fH) << ", " << matchpool::fmt_double(eq.i_fL)
          << ")  i_m = (" << matchpool::fmt_double(eq.i_mH) << ", "
          << matchpool::fmt_double(eq.i_mL) << ")  "
          << matchpool::to_string(eq.stability) << "\n";
  } else {
    out << matchpool::twopop_row_header() << "\n";
    for (const matchpool::TwoPopEquilibrium& eq : sol.equilibria)
      out << matchpool::twopop_row(eq) << "\n";
  }
  return kExitOk;
}

int cmd_verify(const ScenarioConfig& cfg, const CliOptions& opt, std::ostream& out) {
  require_blocks(cfg, false, false, false, false, "verify");
  const std::uint64_t seed = opt.seed.value_or(cfg.solver.seed);
  const std::size_t samples = cfg.verify_samples.value_or(1000);
  if (samples < 1) throw ConfigError("config error: verify.samples must be >= 1");
  const matchpool::VerifyReport report = matchpool::run_verify(seed, samples);
  for (const matchpool::VerifySuiteResult& suite : report.suites) {
    out << "suite " << suite.name << ": checked " << suite.checked << ", failed "
        << suite.failed << " [" << (suite.pass() ? "PASS" : "FAIL") << "]\n";
  }
  for (const matchpool::VerifySuiteResult& suite : report.suites) {
    if (!suite.pass()) {
      out << "first counterexample (" << suite.name << "):\n"
          << suite.first_counterexample;
      break;
    }
  }
  return report.all_passed() ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matchpool: equilibrium toolkit for two-type matching pools"};
  app.require_subcommand(1);

  CliOptions opt;
  const auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "scenario file")->required();
    sub->add_option("--tol", opt.tol, "fixed-point tolerance override");
    sub->add_option("--seed", opt.seed, "random seed override");
    sub->add_option("--out", opt.out_path, "write output to file instead of stdout");
    sub->add_option("--format", opt.format, "csv | summary")
        ->check(CLI::IsMember({"csv", "summary"}));
  };
  CLI::App* solve = app.add_subcommand("solve", "enumerate equilibria of one economy");
  CLI::App* sweep = app.add_subcommand("sweep", "solve along a one-parameter grid");
  CLI::App* policy = app.add_subcommand("policy", "baseline vs intervention report");
  CLI::App* twopop = app.add_subcommand("twopop", "two-population equilibria");
  CLI::App* verify = app.add_subcommand("verify", "run the randomized property battery");
  for (CLI::App* sub : {solve, sweep, policy, twopop, verify}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    const ScenarioConfig cfg = matchpool::parse_scenario_file(opt.config_path);

    std::ofstream file_out;
    if (!opt.out_path.empty()) {
      file_out.open(opt.out_path);
      if (!file_out) {
        std::cerr << "cannot open output file '" << opt.out_path << "'\n";
        return kExitConfigError;
      }
    }
    std::ostream& out = opt.out_path.empty() ? std::cout : file_out;

    if (solve->parsed()) return cmd_solve(cfg, opt, out);
    if (sweep->parsed()) return cmd_sweep(cfg, opt, out);
    if (policy->parsed()) return cmd_policy(cfg, opt, out);
    if (twopop->parsed()) return cmd_twopop(cfg, opt, out);
    if (verify->parsed()) return cmd_verify(cfg, opt, out);
    return kExitConfigError;
  } catch (const ConfigError& err) {
    std::cerr << err.what() << "\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kExitConfigError;
  } catch (const matchpool::SolverError& err) {
    std::cerr << "solver error: " << err.what() << "\n";
    return kExitSolverError;
  }
}
