// Acceptance suite: end-to-end checks of the toolkit against the
// published example economies and the randomized property batteries.
// Prints one pass/fail line per criterion; exits nonzero on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "economies.hpp"
#include "matchpool/policy.hpp"
#include "matchpool/sampler.hpp"
#include "matchpool/solver.hpp"
#include "matchpool/statics.hpp"
#include "matchpool/twopop.hpp"
#include "matchpool/verify.hpp"

using namespace matchpool;

namespace {

constexpr std::uint64_t kSeed = 20240101;

struct Criterion {
  std::string name;
  double time_limit_s;
  std::function<bool(std::string&)> run;
};

bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

// ---------------------------------------------------------------- 1
bool golden_compensation_example(std::string& detail) {
  const ModelParams base = testutil::compensation_economy();
  const Equilibrium focal = pareto_dominant(find_equilibria(base));
  bool ok = near(focal.W_star, 0.205, 1e-9) && near(focal.i_H, 0.525, 1e-9) &&
            near(focal.i_L, 0.475, 1e-9) && near(focal.pi_H, 0.0275625, 1e-9) &&
            near(focal.pi_L, 0.0225625, 1e-9);

  const Abstinence shift{-0.01, -0.03};
  const PolicyReport rep = compare(base, shift);
  ok = ok && near(rep.focal_after.W_star, 0.225, 1e-9) &&
       near(rep.focal_after.i_H, 0.375, 1e-9) &&
       near(rep.focal_after.i_L, 0.225, 1e-9) &&
       near(rep.focal_after.pi_H, 0.0140625, 1e-9) &&
       near(rep.focal_after.pi_L, 0.0050625, 1e-9);

  const CompensationLedger led = slutsky_ledger(base, shift);
  ok = ok && near(led.compensation.H, 0.00525, 1e-9) &&
       near(led.compensation.L, 0.01425, 1e-9) && !led.sufficient_H &&
       !led.sufficient_L;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "W* %.9f -> %.9f, comp (%.6f, %.6f)",
                focal.W_star, rep.focal_after.W_star, led.compensation.H,
                led.compensation.L);
  detail = buf;
  return ok;
}

// ---------------------------------------------------------------- 2
bool golden_counterintuitive_example(std::string& detail) {
  const ModelParams base = testutil::coexistence_economy();
  const Equilibrium before = pareto_dominant(find_equilibria(base));
  // derived quadratic roots of 2W^2 - 1.61W + 0.321 and 2W^2 - 1.62W + 0.327
  const double w0 = (1.61 - std::sqrt(1.61 * 1.61 - 8.0 * 0.321)) / 4.0;
  const double w1 = (1.62 - std::sqrt(1.62 * 1.62 - 8.0 * 0.327)) / 4.0;

  bool ok = near(before.W_star, w0, 1e-6) && near(before.i_H, 0.48, 5e-3) &&
            near(before.i_L, 0.43, 5e-3);

  ModelParams raised = base;
  raised.theta_H = 0.47;
  const Equilibrium after = pareto_dominant(find_equilibria(raised));
  ok = ok && near(after.W_star, w1, 1e-6) && near(after.i_H, 0.44, 5e-3) &&
       near(after.i_L, 0.34, 5e-3) && after.pi_H < before.pi_H &&
       after.pi_L < before.pi_L;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "W* %.5f -> %.5f, i_H %.5f -> %.5f, payoffs fall", before.W_star,
                after.W_star, before.i_H, after.i_H);
  detail = buf;
  return ok;
}

// ---------------------------------------------------------------- 3
bool regime_consistency(std::string& detail) {
  std::size_t agree = 0;
  const std::size_t samples = 1000;
  for (std::size_t n = 0; n < samples; ++n) {
    Rng rng = substream(kSeed, n);
    const SampledEconomy econ = draw_solvable_economy(rng);
    std::size_t inactive = 0;
    for (const Equilibrium& eq : econ.set.equilibria)
      if (eq.activity == Activity::LInactive) ++inactive;
    const std::size_t count = econ.set.equilibria.size();
    bool match = false;
    switch (econ.set.regime.tag) {
      case RegimeTag::UniqueBothActive: match = count == 1 && inactive == 0; break;
      case RegimeTag::UniqueLInactive: match = count == 1 && inactive == 1; break;
      case RegimeTag::Coexistence: match = count == 3 && inactive == 1; break;
      case RegimeTag::Boundary: match = false; break;
    }
    if (match) ++agree;
  }
  detail = std::to_string(agree) + "/" + std::to_string(samples) + " agree";
  return agree == samples;
}

// ---------------------------------------------------------------- 4
bool prop2_sign_battery(std::string& detail) {
  const SignCheckSummary sum = sign_check(1000, kSeed);
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "%zu economies, %zu sign checks, %zu joint shifts, %zu corner "
                "cases, %zu failures",
                sum.checked, sum.primitive_checks, sum.joint_checks,
                sum.corner_checks, sum.failures.size());
  detail = buf;
  return sum.checked >= 1000 && sum.failures.empty() && sum.corner_checks > 0 &&
         sum.joint_checks > 0;
}

// ---------------------------------------------------------------- 5
bool oracle_equivalence(std::string& detail) {
  std::size_t three_root_sets = 0;
  const std::size_t samples = 10000;
  for (std::size_t n = 0; n < samples; ++n) {
    Rng rng = substream(kSeed ^ 0x5u, n);
    const SampledEconomy econ = draw_solvable_economy(rng);
    const std::vector<double> oracle = brute_force_equilibria(econ.params);
    if (oracle.size() != econ.set.equilibria.size()) {
      detail = "root count mismatch";
      return false;
    }
    for (std::size_t i = 0; i < oracle.size(); ++i)
      if (!near(oracle[i], econ.set.equilibria[i].W_star, 1e-6)) {
        detail = "root location mismatch";
        return false;
      }
    if (econ.set.equilibria.size() == 3) {
      ++three_root_sets;
      const bool alternates =
          econ.set.equilibria[0].stability == Stability::Stable &&
          econ.set.equilibria[1].stability == Stability::Unstable &&
          econ.set.equilibria[2].stability == Stability::Stable;
      if (!alternates) {
        detail = "stability pattern broken in a 3-root case";
        return false;
      }
    }
  }
  detail = std::to_string(samples) + " economies agree (" +
           std::to_string(three_root_sets) + " with 3 roots)";
  return three_root_sets > 0;
}

// ---------------------------------------------------------------- 6
bool psi_invariance(std::string& detail) {
  const std::vector<double> factors = {0.5, 2.0, 5.0};
  std::size_t checked = 0;
  double worst_W = 0.0, worst_scale = 0.0;
  std::size_t n = 0;
  while (checked < 100 && n < 100000) {
    Rng rng = substream(kSeed ^ 0x6u, n++);
    const ModelParams p = draw_solvable_economy(rng).params;
    ModelParams halved = p;
    halved.psi *= 0.5;
    if (!is_valid(halved)) continue;
    const PsiInvarianceSummary sum = psi_invariance_check(p, factors);
    if (!sum.pass) {
      detail = sum.detail;
      return false;
    }
    worst_W = std::max(worst_W, sum.max_W_deviation);
    worst_scale = std::max(worst_scale, sum.max_scaling_deviation);
    ++checked;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%zu economies x factors {0.5, 2, 5}; max dev W* %.2e, scaling %.2e",
                checked, worst_W, worst_scale);
  detail = buf;
  return checked >= 100 && worst_W <= 1e-9 && worst_scale <= 1e-9;
}

// ---------------------------------------------------------------- 7
bool treatment_vs_abstinence(std::string& detail) {
  std::size_t included = 0, excluded = 0;
  std::size_t n = 0;
  while (included < 100 && n < 100000) {
    Rng rng = substream(kSeed ^ 0x7u, n++);
    const SampledEconomy econ = draw_solvable_economy(rng);
    const Equilibrium focal = pareto_dominant(econ.set);
    if (focal.activity != Activity::BothActive) continue;

    PolicyReport treatment;
    try {
      treatment = compare(econ.params, TreatmentFactor{0.8});
    } catch (const SolverError&) {
      ++excluded;
      continue;
    }
    if (treatment.focal_after.activity != Activity::BothActive) {
      ++excluded;
      continue;
    }
    PolicyReport abstinence;
    try {
      abstinence = compare(econ.params, Abstinence{-0.01, -0.03});
    } catch (const SolverError&) {
      ++excluded;
      continue;
    }
    ++included;

    const double s = 1e-9;
    const bool treatment_ok =
        treatment.delta_W <= s &&
        treatment.focal_after.i_H >= treatment.focal_before.i_H - s &&
        treatment.focal_after.i_L >= treatment.focal_before.i_L - s &&
        treatment.focal_after.pi_H >= treatment.focal_before.pi_H - s &&
        treatment.focal_after.pi_L >= treatment.focal_before.pi_L - s;
    const bool abstinence_ok =
        abstinence.delta_W >= -s &&
        abstinence.payoff_new_utility.H <= abstinence.focal_before.pi_H + s &&
        abstinence.payoff_new_utility.L <= abstinence.focal_before.pi_L + s &&
        abstinence.payoff_old_utility.H <= abstinence.focal_before.pi_H + s &&
        abstinence.payoff_old_utility.L <= abstinence.focal_before.pi_L + s;
    if (!treatment_ok || !abstinence_ok) {
      detail = std::string("counterexample: ") +
               (!treatment_ok ? "treatment direction" : "abstinence direction");
      return false;
    }
  }
  detail = std::to_string(included) + " economies included, " +
           std::to_string(excluded) + " boundary/transition cases excluded";
  return included >= 100;
}

// ---------------------------------------------------------------- 8
bool twopop_reduction(std::string& detail) {
  const ModelParams p = testutil::compensation_economy();
  const TwoPopParams clone{p, p, 1.0, 1.0};
  const TwoPopSolution sol = solve_two_pop(clone);
  for (const TwoPopEquilibrium& eq : sol.equilibria) {
    if (near(eq.W_f, 0.205, 1e-8) && near(eq.W_m, 0.205, 1e-8)) {
      char buf[120];
      std::snprintf(buf, sizeof(buf), "symmetric equilibrium at (%.10f, %.10f)",
                    eq.W_f, eq.W_m);
      detail = buf;
      return true;
    }
  }
  detail = "symmetric focal equilibrium not found";
  return false;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"golden compensation example (exact rationals, tol 1e-9)", 1.0,
       golden_compensation_example},
      {"golden counterintuitive example (reference decimals 5e-3, roots 1e-6)", 1.0,
       golden_counterintuitive_example},
      {"regime prediction agrees with enumeration (1000 economies)", 30.0,
       regime_consistency},
      {"comparative-statics sign battery (1000 economies)", 120.0,
       prop2_sign_battery},
      {"solver matches brute-force oracle within 1e-6 (10000 economies)", 120.0,
       oracle_equivalence},
      {"psi invariance under factors {0.5, 2, 5} (100 economies)", 120.0,
       psi_invariance},
      {"treatment lowers, abstinence raises prevalence (100 economies)", 120.0,
       treatment_vs_abstinence},
      {"two-population reduction recovers W = 0.205 (tol 1e-8)", 30.0,
       twopop_reduction},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = criteria[i].run(detail);
    } catch (const std::exception& err) {
      detail = std::string("exception: ") + err.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (elapsed > criteria[i].time_limit_s) {
      ok = false;
      detail += " [exceeded time limit]";
    }
    std::printf("[%s] criterion %zu: %s — %s (%.2fs)\n", ok ? "PASS" : "FAIL",
                i + 1, criteria[i].name.c_str(), detail.c_str(), elapsed);
    if (!ok) ++failures;
  }
  if (failures > 0) {
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
