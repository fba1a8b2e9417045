#ifndef MATCHPOOL_POLICY_HPP
#define MATCHPOOL_POLICY_HPP

#include <stdexcept>
#include <string>
#include <variant>

#include "matchpool/solver.hpp"

// Intervention families as parameter transforms, baseline-vs-treated
// comparisons of the focal equilibria, and the compensation ledger for
// preference shifts.

namespace matchpool {

struct InvalidIntervention : SolverError {
  using SolverError::SolverError;
};

// Additive shift of the match benefits. Abstinence programs are the
// canonical use (both shifts nonpositive, the low type cut at least as
// much); positive shifts express a stronger taste for matching, as in
// the counterintuitive benefit-raise exercise.
struct Abstinence {
  double dtheta_H = 0.0;
  double dtheta_L = 0.0;
};

// Proportional reduction of both infection rates. Also stands in for a
// lower transmission probability or a lower cost of infection.
struct TreatmentFactor {
  double factor = 1.0;  // in (0, 1]
};

// Additive reduction of the infection rates; both shifts nonpositive.
struct TreatmentShift {
  double dY_H = 0.0;
  double dY_L = 0.0;
};

// Rescales the satiation coefficient; leaves prevalence untouched.
struct Satiation {
  double factor = 1.0;  // > 0
};

using Intervention = std::variant<Abstinence, TreatmentFactor, TreatmentShift, Satiation>;

inline const char* kind_name(const Intervention& iv) {
  struct Namer {
    const char* operator()(const Abstinence&) const { return "abstinence"; }
    const char* operator()(const TreatmentFactor&) const { return "treatment_factor"; }
    const char* operator()(const TreatmentShift&) const { return "treatment_shift"; }
    const char* operator()(const Satiation&) const { return "satiation"; }
  };
  return std::visit(Namer{}, iv);
}

// Transforms the economy; throws InvalidIntervention when the shift
// itself is malformed or the transformed economy violates an invariant.
inline ModelParams apply_intervention(const ModelParams& params,
                                      const Intervention& iv) {
  validate(params);
  ModelParams out = params;
  if (const auto* ab = std::get_if<Abstinence>(&iv)) {
    out.theta_H += ab->dtheta_H;
    out.theta_L += ab->dtheta_L;
  } else if (const auto* tf = std::get_if<TreatmentFactor>(&iv)) {
    if (!(tf->factor > 0.0 && tf->factor <= 1.0))
      throw InvalidIntervention("treatment: factor must lie in (0, 1]");
    out.Y_H *= tf->factor;
    out.Y_L *= tf->factor;
  } else if (const auto* ts = std::get_if<TreatmentShift>(&iv)) {
    if (ts->dY_H > 0.0 || ts->dY_L > 0.0)
      throw InvalidIntervention("treatment: infection-rate shifts must be <= 0");
    out.Y_H += ts->dY_H;
    out.Y_L += ts->dY_L;
  } else if (const auto* sa = std::get_if<Satiation>(&iv)) {
    if (!(sa->factor > 0.0))
      throw InvalidIntervention("satiation: factor must be > 0");
    out.psi *= sa->factor;
  }
  const std::string why = describe_invalid(out);
  if (!why.empty())
    throw InvalidIntervention("transformed economy invalid: " + why);
  return out;
}

struct TypePair {
  double H = 0.0;
  double L = 0.0;
};

struct PolicyReport {
  ModelParams params_before;
  ModelParams params_after;
  EquilibriumSet baseline;
  EquilibriumSet treated;
  Equilibrium focal_before;
  Equilibrium focal_after;
  double delta_W = 0.0;
  // Payoff of the new equilibrium action in the new pool, evaluated
  // under the old and the new benefit parameters.
  TypePair payoff_old_utility;
  TypePair payoff_new_utility;
  bool chain_holds_H = false;  // pi_k0(i_k0*) >= pi_k0(i_k1*) >= pi_k1(i_k1*)
  bool chain_holds_L = false;
};

// Solves both economies, pairs their Pareto-dominant equilibria and
// cross-evaluates payoffs under the pre-change benefits.
inline PolicyReport compare(const ModelParams& params, const Intervention& iv) {
  PolicyReport rep;
  rep.params_before = params;
  rep.params_after = apply_intervention(params, iv);
  rep.baseline = find_equilibria(params);
  rep.treated = find_equilibria(rep.params_after);
  rep.focal_before = pareto_dominant(rep.baseline);
  rep.focal_after = pareto_dominant(rep.treated);
  rep.delta_W = rep.focal_after.W_star - rep.focal_before.W_star;

  const double W1 = rep.focal_after.W_star;
  rep.payoff_old_utility.H = payoff(params, TypeId::H, rep.focal_after.i_H, W1);
  rep.payoff_old_utility.L = payoff(params, TypeId::L, rep.focal_after.i_L, W1);
  rep.payoff_new_utility.H = rep.focal_after.pi_H;
  rep.payoff_new_utility.L = rep.focal_after.pi_L;

  const double slack = 1e-12;
  rep.chain_holds_H = rep.focal_before.pi_H >= rep.payoff_old_utility.H - slack &&
                      rep.payoff_old_utility.H >= rep.payoff_new_utility.H - slack;
  rep.chain_holds_L = rep.focal_before.pi_L >= rep.payoff_old_utility.L - slack &&
                      rep.payoff_old_utility.L >= rep.payoff_new_utility.L - slack;
  return rep;
}

// Compensation at the original action, payoff at the new equilibrium:
// sufficient when the compensated payoff reaches the baseline payoff.
struct CompensationLedger {
  TypePair compensation;        // (theta_k0 - theta_k1) * i_k0*
  TypePair compensated_payoff;  // pi_k1* + compensation
  TypePair baseline_payoff;     // pi_k0*
  bool sufficient_H = false;
  bool sufficient_L = false;
};

inline CompensationLedger slutsky_ledger(const ModelParams& params,
                                         const Abstinence& shift) {
  if (shift.dtheta_H > 0.0 || shift.dtheta_L > 0.0)
    throw InvalidIntervention(
        "slutsky_ledger: compensation is defined for benefit reductions only");
  const PolicyReport rep = compare(params, Intervention{shift});
  CompensationLedger led;
  led.compensation.H = -shift.dtheta_H * rep.focal_before.i_H;
  led.compensation.L = -shift.dtheta_L * rep.focal_before.i_L;
  led.baseline_payoff.H = rep.focal_before.pi_H;
  led.baseline_payoff.L = rep.focal_before.pi_L;
  led.compensated_payoff.H = rep.focal_after.pi_H + led.compensation.H;
  led.compensated_payoff.L = rep.focal_after.pi_L + led.compensation.L;
  led.sufficient_H = led.compensated_payoff.H >= led.baseline_payoff.H - 1e-12;
  led.sufficient_L = led.compensated_payoff.L >= led.baseline_payoff.L - 1e-12;
  return led;
}

}  // namespace matchpool

#endif  // MATCHPOOL_POLICY_HPP
