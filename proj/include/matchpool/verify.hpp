#ifndef MATCHPOOL_VERIFY_HPP
#define MATCHPOOL_VERIFY_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "matchpool/config.hpp"
#include "matchpool/sampler.hpp"
#include "matchpool/statics.hpp"

// The randomized property battery behind `verify`: comparative-statics
// signs, solver-vs-oracle agreement, psi invariance and stability
// alternation. Failures are collected as data with the offending economy
// rendered in config syntax.

namespace matchpool {

struct VerifySuiteResult {
  std::string name;
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::string first_counterexample;  // config text, empty when clean

  bool pass() const { return failed == 0; }
};

struct VerifyReport {
  std::vector<VerifySuiteResult> suites;

  bool all_passed() const {
    for (const VerifySuiteResult& s : suites)
      if (!s.pass()) return false;
    return true;
  }
};

// The solver is injectable so the battery itself can be exercised
// against a deliberately broken implementation.
struct VerifyHooks {
  std::function<EquilibriumSet(const ModelParams&)> solve =
      [](const ModelParams& p) { return find_equilibria(p); };
};

namespace verify_detail {

inline void note_failure(VerifySuiteResult& suite, const ModelParams& p,
                         const std::string& what) {
  ++suite.failed;
  if (suite.first_counterexample.empty())
    suite.first_counterexample = "# " + what + "\n" + to_config_text(p);
}

}  // namespace verify_detail

inline VerifyReport run_verify(std::uint64_t seed, std::size_t samples,
                               const VerifyHooks& hooks = VerifyHooks{}) {
  VerifyReport report;

  {
    VerifySuiteResult suite;
    suite.name = "sign_battery";
    const SignCheckSummary sum = sign_check(samples, seed);
    suite.checked = sum.primitive_checks + sum.joint_checks + sum.corner_checks;
    suite.failed = sum.failures.size();
    if (!sum.failures.empty())
      suite.first_counterexample = "# " + sum.failures.front().detail + "\n" +
                                   to_config_text(sum.failures.front().economy);
    report.suites.push_back(suite);
  }

  {
    VerifySuiteResult suite;
    suite.name = "oracle_equivalence";
    for (std::size_t n = 0; n < samples; ++n) {
      Rng rng = substream(seed ^ 0x6f4a91e3ULL, n);
      const SampledEconomy econ = draw_solvable_economy(rng);
      ++suite.checked;
      EquilibriumSet solved;
      try {
        solved = hooks.solve(econ.params);
      } catch (const SolverError& err) {
        verify_detail::note_failure(suite, econ.params, err.what());
        continue;
      }
      const std::vector<double> oracle = brute_force_equilibria(econ.params);
      if (oracle.size() != solved.equilibria.size()) {
        std::ostringstream what;
        what << "oracle found " << oracle.size() << " roots, solver "
             << solved.equilibria.size();
        verify_detail::note_failure(suite, econ.params, what.str());
        continue;
      }
      for (std::size_t i = 0; i < oracle.size(); ++i) {
        if (std::fabs(oracle[i] - solved.equilibria[i].W_star) > 1e-6) {
          std::ostringstream what;
          what << "root " << i << " differs: oracle " << oracle[i] << " vs solver "
               << solved.equilibria[i].W_star;
          verify_detail::note_failure(suite, econ.params, what.str());
          break;
        }
      }
    }
    report.suites.push_back(suite);
  }

  {
    VerifySuiteResult suite;
    suite.name = "psi_invariance";
    const std::vector<double> factors = {0.5, 2.0, 5.0};
    for (std::size_t n = 0; n < samples; ++n) {
      Rng rng = substream(seed ^ 0x2cb1f7adULL, n);
      ModelParams p;
      bool found = false;
      for (int attempt = 0; attempt < 1000 && !found; ++attempt) {
        p = draw_solvable_economy(rng).params;
        ModelParams halved = p;
        halved.psi *= 0.5;
        found = is_valid(halved);  // smallest factor is the binding one
      }
      if (!found) continue;
      ++suite.checked;
      const PsiInvarianceSummary sum = psi_invariance_check(p, factors);
      if (!sum.pass) verify_detail::note_failure(suite, p, sum.detail);
    }
    report.suites.push_back(suite);
  }

  {
    VerifySuiteResult suite;
    suite.name = "stability_alternation";
    for (std::size_t n = 0; n < samples; ++n) {
      Rng rng = substream(seed ^ 0x91d87a55ULL, n);
      const SampledEconomy econ = draw_solvable_economy(rng);
      ++suite.checked;
      EquilibriumSet solved;
      try {
        solved = hooks.solve(econ.params);
      } catch (const SolverError& err) {
        verify_detail::note_failure(suite, econ.params, err.what());
        continue;
      }
      const std::vector<Equilibrium>& eqs = solved.equilibria;
      bool ok = !eqs.empty() && eqs.size() <= 3 && eqs.size() != 2;
      for (std::size_t i = 0; ok && i < eqs.size(); ++i) {
        const Stability expected = i % 2 == 0 ? Stability::Stable : Stability::Unstable;
        if (eqs[i].stability != expected) ok = false;
      }
      if (!ok) {
        std::ostringstream what;
        what << "stability pattern broken, count " << eqs.size() << ":";
        for (const Equilibrium& eq : eqs)
          what << " " << to_string(eq.stability) << "@" << eq.W_star;
        verify_detail::note_failure(suite, econ.params, what.str());
      }
    }
    report.suites.push_back(suite);
  }

  return report;
}

}  // namespace matchpool

#endif  // MATCHPOOL_VERIFY_HPP
