#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "economies.hpp"
#include "matchpool/policy.hpp"
#include "matchpool/sampler.hpp"

using namespace matchpool;
using testutil::compensation_economy;
using testutil::unique_interior_economy;

namespace {

const Abstinence kPublishedShift{-0.01, -0.03};  // theta (0.31,0.30) -> (0.30,0.27)

}  // namespace

TEST_CASE("interventions transform the economy") {
  const ModelParams p = compensation_economy();

  SECTION("abstinence shifts the benefits down") {
    const ModelParams q = apply_intervention(p, kPublishedShift);
    REQUIRE(q.theta_H == Catch::Approx(0.30).margin(1e-15));
    REQUIRE(q.theta_L == Catch::Approx(0.27).margin(1e-15));
    REQUIRE(q.Y_H == p.Y_H);
    REQUIRE(q.psi == p.psi);
  }
  SECTION("treatment factor 1 is the identity") {
    const ModelParams q = apply_intervention(p, TreatmentFactor{1.0});
    REQUIRE(q.Y_H == p.Y_H);
    REQUIRE(q.Y_L == p.Y_L);
  }
  SECTION("treatment factor scales both infection rates") {
    const ModelParams roomy{0.5, 0.5, 0.6, 0.1, 0.46, 0.45, 0.5};
    const ModelParams q = apply_intervention(roomy, TreatmentFactor{0.5});
    REQUIRE(q.Y_H == Catch::Approx(0.3).margin(1e-15));
    REQUIRE(q.Y_L == Catch::Approx(0.05).margin(1e-15));
  }
  SECTION("scaling that breaks interiority is rejected, not clamped") {
    REQUIRE_THROWS_AS(
        apply_intervention(testutil::coexistence_economy(), TreatmentFactor{0.5}),
        InvalidIntervention);
  }
  SECTION("malformed interventions are rejected") {
    REQUIRE_THROWS_AS(apply_intervention(p, TreatmentFactor{0.0}),
                      InvalidIntervention);
    REQUIRE_THROWS_AS(apply_intervention(p, TreatmentFactor{1.2}),
                      InvalidIntervention);
    REQUIRE_THROWS_AS(apply_intervention(p, TreatmentShift{0.1, 0.0}),
                      InvalidIntervention);
    REQUIRE_THROWS_AS(apply_intervention(p, Satiation{-2.0}), InvalidIntervention);
    // benefit order breaks after the shift
    REQUIRE_THROWS_AS(apply_intervention(p, Abstinence{-0.02, -0.005}),
                      InvalidIntervention);
  }
}

TEST_CASE("abstinence on the published economy") {
  const PolicyReport rep = compare(compensation_economy(), kPublishedShift);

  REQUIRE(rep.focal_before.W_star == Catch::Approx(0.205).margin(1e-10));
  REQUIRE(rep.focal_after.W_star == Catch::Approx(0.225).margin(1e-10));
  REQUIRE(rep.delta_W == Catch::Approx(0.02).margin(1e-9));

  REQUIRE(rep.focal_before.i_H == Catch::Approx(0.525).margin(1e-9));
  REQUIRE(rep.focal_before.i_L == Catch::Approx(0.475).margin(1e-9));
  REQUIRE(rep.focal_after.i_H == Catch::Approx(0.375).margin(1e-9));
  REQUIRE(rep.focal_after.i_L == Catch::Approx(0.225).margin(1e-9));

  REQUIRE(rep.focal_before.pi_H == Catch::Approx(0.0275625).margin(1e-9));
  REQUIRE(rep.focal_before.pi_L == Catch::Approx(0.0225625).margin(1e-9));
  REQUIRE(rep.payoff_new_utility.H == Catch::Approx(0.0140625).margin(1e-9));
  REQUIRE(rep.payoff_new_utility.L == Catch::Approx(0.0050625).margin(1e-9));
  REQUIRE(rep.payoff_old_utility.H == Catch::Approx(0.0178125).margin(1e-9));
  REQUIRE(rep.payoff_old_utility.L == Catch::Approx(0.0118125).margin(1e-9));

  REQUIRE(rep.chain_holds_H);
  REQUIRE(rep.chain_holds_L);
}

TEST_CASE("null intervention reproduces the baseline") {
  const PolicyReport rep = compare(unique_interior_economy(), TreatmentFactor{1.0});
  REQUIRE(rep.delta_W == 0.0);
  REQUIRE(rep.focal_before.W_star == rep.focal_after.W_star);
  REQUIRE(rep.focal_before.i_H == rep.focal_after.i_H);
  REQUIRE(rep.payoff_old_utility.H ==
          Catch::Approx(rep.payoff_new_utility.H).margin(1e-15));
}

TEST_CASE("treatment lowers prevalence and raises activity and payoffs") {
  const PolicyReport rep = compare(unique_interior_economy(), TreatmentFactor{0.8});
  REQUIRE(rep.delta_W <= 1e-12);
  REQUIRE(rep.focal_after.i_H >= rep.focal_before.i_H - 1e-12);
  REQUIRE(rep.focal_after.i_L >= rep.focal_before.i_L - 1e-12);
  REQUIRE(rep.focal_after.pi_H >= rep.focal_before.pi_H - 1e-12);
  REQUIRE(rep.focal_after.pi_L >= rep.focal_before.pi_L - 1e-12);
}

TEST_CASE("compensation ledger on the published example") {
  const CompensationLedger led =
      slutsky_ledger(compensation_economy(), kPublishedShift);
  REQUIRE(led.compensation.H == Catch::Approx(0.00525).margin(1e-9));
  REQUIRE(led.compensation.L == Catch::Approx(0.01425).margin(1e-9));
  REQUIRE(led.compensated_payoff.H == Catch::Approx(0.0193125).margin(1e-9));
  REQUIRE(led.compensated_payoff.L == Catch::Approx(0.0193125).margin(1e-9));
  REQUIRE(led.baseline_payoff.H == Catch::Approx(0.0275625).margin(1e-9));
  REQUIRE(led.baseline_payoff.L == Catch::Approx(0.0225625).margin(1e-9));
  REQUIRE_FALSE(led.sufficient_H);
  REQUIRE_FALSE(led.sufficient_L);
}

TEST_CASE("zero shift compensates trivially") {
  const CompensationLedger led =
      slutsky_ledger(unique_interior_economy(), Abstinence{0.0, 0.0});
  REQUIRE(led.compensation.H == 0.0);
  REQUIRE(led.compensation.L == 0.0);
  REQUIRE(led.sufficient_H);
  REQUIRE(led.sufficient_L);
}

TEST_CASE("the ledger only accepts genuine reductions") {
  REQUIRE_THROWS_AS(slutsky_ledger(compensation_economy(), Abstinence{0.01, 0.0}),
                    InvalidIntervention);
}

TEST_CASE("raising the high-type benefit backfires") {
  // theta_H 0.46 -> 0.47 on the coexistence economy: prevalence rises,
  // activity and payoffs of both types fall
  const PolicyReport rep =
      compare(testutil::coexistence_economy(), Abstinence{0.01, 0.0});
  REQUIRE(rep.focal_before.W_star == Catch::Approx(0.36369).margin(5e-6));
  REQUIRE(rep.focal_after.W_star == Catch::Approx(0.38209).margin(5e-6));
  REQUIRE(rep.delta_W > 0.0);
  REQUIRE(rep.focal_after.i_H < rep.focal_before.i_H);
  REQUIRE(rep.focal_after.i_L < rep.focal_before.i_L);
  REQUIRE(rep.focal_after.pi_H < rep.focal_before.pi_H);
  REQUIRE(rep.focal_after.pi_L < rep.focal_before.pi_L);
  REQUIRE(rep.payoff_old_utility.H < rep.focal_before.pi_H);
  REQUIRE(rep.payoff_old_utility.L < rep.focal_before.pi_L);
}

TEST_CASE("compensation suffices when the pool composition is fixed") {
  // near-degenerate infection rates: the adverse-selection externality
  // vanishes and revealed preference makes the compensation sufficient
  ModelParams p = unique_interior_economy();
  p.Y_L = 0.2;
  p.Y_H = 0.2 + 1e-9;
  REQUIRE(is_valid(p));
  const CompensationLedger led = slutsky_ledger(p, kPublishedShift);
  REQUIRE(led.sufficient_H);
  REQUIRE(led.sufficient_L);
}

TEST_CASE("treatment monotonicity on random both-active economies") {
  Rng rng(20240101);
  int checked = 0, excluded = 0;
  for (int n = 0; n < 100; ++n) {
    const SampledEconomy econ = draw_solvable_economy(rng);
    const Equilibrium focal = pareto_dominant(econ.set);
    if (focal.activity != Activity::BothActive) continue;
    try {
      const PolicyReport rep = compare(econ.params, TreatmentFactor{0.9});
      if (rep.focal_after.activity != Activity::BothActive) {
        ++excluded;  // focal branch changed along the way
        continue;
      }
      ++checked;
      REQUIRE(rep.delta_W <= 1e-9);
      REQUIRE(rep.focal_after.i_H >= rep.focal_before.i_H - 1e-9);
      REQUIRE(rep.focal_after.i_L >= rep.focal_before.i_L - 1e-9);
      REQUIRE(rep.focal_after.pi_H >= rep.focal_before.pi_H - 1e-9);
      REQUIRE(rep.focal_after.pi_L >= rep.focal_before.pi_L - 1e-9);
    } catch (const InvalidIntervention&) {
      ++excluded;  // scaled economy left the interiority region
    }
  }
  REQUIRE(checked >= 30);
}

TEST_CASE("abstinence chain holds whenever the low type cuts at least as much") {
  Rng rng(8080);
  int checked = 0;
  for (int n = 0; n < 100; ++n) {
    const SampledEconomy econ = draw_solvable_economy(rng);
    const double dH = -0.02 * rng.u01();
    const double dL = dH - 0.02 * rng.u01();
    const Abstinence shift{dH, dL};
    try {
      const PolicyReport rep = compare(econ.params, shift);
      ++checked;
      REQUIRE(rep.delta_W >= -1e-9);
      REQUIRE(rep.chain_holds_H);
      REQUIRE(rep.chain_holds_L);
    } catch (const InvalidIntervention&) {
      // shift pushed theta_L below zero or past theta_H; skip
    }
  }
  REQUIRE(checked >= 50);
}

TEST_CASE("satiation interventions never move prevalence") {
  Rng rng(5150);
  for (int n = 0; n < 100; ++n) {
    const SampledEconomy econ = draw_solvable_economy(rng);
    const PolicyReport rep = compare(econ.params, Satiation{2.0});
    REQUIRE(std::fabs(rep.delta_W) <= 1e-9);
    REQUIRE(rep.focal_after.pi_H <= rep.focal_before.pi_H + 1e-12);
    REQUIRE(rep.focal_after.pi_L <= rep.focal_before.pi_L + 1e-12);
  }
}
