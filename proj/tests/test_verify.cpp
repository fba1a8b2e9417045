#include <catch2/catch_amalgamated.hpp>

#include "matchpool/verify.hpp"

using namespace matchpool;

TEST_CASE("the full battery passes on a small seeded run") {
  const VerifyReport report = run_verify(20240101, 20);
  REQUIRE(report.suites.size() == 4);
  REQUIRE(report.suites[0].name == "sign_battery");
  REQUIRE(report.suites[1].name == "oracle_equivalence");
  REQUIRE(report.suites[2].name == "psi_invariance");
  REQUIRE(report.suites[3].name == "stability_alternation");
  for (const VerifySuiteResult& suite : report.suites) {
    INFO(suite.name << ": " << suite.first_counterexample);
    REQUIRE(suite.checked > 0);
    REQUIRE(suite.pass());
  }
  REQUIRE(report.all_passed());
}

TEST_CASE("battery runs are reproducible") {
  const VerifyReport a = run_verify(7, 10);
  const VerifyReport b = run_verify(7, 10);
  REQUIRE(a.suites.size() == b.suites.size());
  for (std::size_t i = 0; i < a.suites.size(); ++i) {
    REQUIRE(a.suites[i].checked == b.suites[i].checked);
    REQUIRE(a.suites[i].failed == b.suites[i].failed);
  }
}

TEST_CASE("a broken solver is caught with a counterexample") {
  SECTION("roots shifted off the oracle") {
    VerifyHooks hooks;
    hooks.solve = [](const ModelParams& p) {
      EquilibriumSet set = find_equilibria(p);
      for (Equilibrium& eq : set.equilibria) eq.W_star += 1e-4;
      return set;
    };
    const VerifyReport report = run_verify(3, 5, hooks);
    REQUIRE_FALSE(report.all_passed());
    bool oracle_failed = false;
    for (const VerifySuiteResult& suite : report.suites)
      if (suite.name == "oracle_equivalence" && !suite.pass()) {
        oracle_failed = true;
        REQUIRE_THAT(suite.first_counterexample,
                     Catch::Matchers::ContainsSubstring("economy.alpha_H"));
      }
    REQUIRE(oracle_failed);
  }
  SECTION("stability labels flipped") {
    VerifyHooks hooks;
    hooks.solve = [](const ModelParams& p) {
      EquilibriumSet set = find_equilibria(p);
      for (Equilibrium& eq : set.equilibria)
        eq.stability = eq.stability == Stability::Stable ? Stability::Unstable
                                                         : Stability::Stable;
      return set;
    };
    const VerifyReport report = run_verify(3, 5, hooks);
    bool alternation_failed = false;
    for (const VerifySuiteResult& suite : report.suites)
      if (suite.name == "stability_alternation" && !suite.pass())
        alternation_failed = true;
    REQUIRE(alternation_failed);
  }
}
