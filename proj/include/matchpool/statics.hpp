#ifndef MATCHPOOL_STATICS_HPP
#define MATCHPOOL_STATICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "matchpool/sampler.hpp"
#include "matchpool/solver.hpp"

// Local sensitivities of stable equilibria, sign verification of the
// comparative-statics predictions, psi invariance and equilibrium-set
// transition tracking along one-dimensional parameter paths.

namespace matchpool {

struct TrackingLost : SolverError {
  using SolverError::SolverError;
};
struct InvalidStep : SolverError {
  using SolverError::SolverError;
};
struct PathInvalid : SolverError {
  using SolverError::SolverError;
};

enum class Primitive { ThetaH, ThetaL, YH, YL, AlphaH, Psi };

constexpr std::array<Primitive, 6> kAllPrimitives = {
    Primitive::ThetaH, Primitive::ThetaL, Primitive::YH,
    Primitive::YL,     Primitive::AlphaH, Primitive::Psi};

inline const char* to_string(Primitive p) {
  switch (p) {
    case Primitive::ThetaH: return "theta_H";
    case Primitive::ThetaL: return "theta_L";
    case Primitive::YH: return "Y_H";
    case Primitive::YL: return "Y_L";
    case Primitive::AlphaH: return "alpha_H";
    case Primitive::Psi: return "psi";
  }
  return "?";
}

inline double get_primitive(const ModelParams& p, Primitive which) {
  switch (which) {
    case Primitive::ThetaH: return p.theta_H;
    case Primitive::ThetaL: return p.theta_L;
    case Primitive::YH: return p.Y_H;
    case Primitive::YL: return p.Y_L;
    case Primitive::AlphaH: return p.alpha_H;
    case Primitive::Psi: return p.psi;
  }
  return 0.0;
}

// alpha moves in lockstep: setting alpha_H also sets alpha_L = 1 - alpha_H.
inline ModelParams with_primitive(ModelParams p, Primitive which, double value) {
  switch (which) {
    case Primitive::ThetaH: p.theta_H = value; break;
    case Primitive::ThetaL: p.theta_L = value; break;
    case Primitive::YH: p.Y_H = value; break;
    case Primitive::YL: p.Y_L = value; break;
    case Primitive::AlphaH:
      p.alpha_H = value;
      p.alpha_L = 1.0 - value;
      break;
    case Primitive::Psi: p.psi = value; break;
  }
  return p;
}

// Follows one equilibrium into a perturbed economy. Corner equilibria
// (W* = Y_H) track the perturbed corner directly; interior ones are
// re-bisected inside a small bracket around the old root, which fails
// with TrackingLost when the root left the bracket (an equilibrium-set
// transition crossed the stencil).
inline double track_root(const ModelParams& perturbed, const Equilibrium& from,
                         double bracket = 5e-4) {
  if (from.activity == Activity::LInactive) {
    if (perturbed.theta_L > perturbed.Y_H)
      throw TrackingLost("track_root: corner equilibrium vanished");
    return perturbed.Y_H;
  }
  const double lo = from.W_star - bracket;
  const double hi = from.W_star + bracket;
  const double f_lo = delta(perturbed, lo);
  const double f_hi = delta(perturbed, hi);
  if (!(f_lo < 0.0 && f_hi > 0.0))
    throw TrackingLost("track_root: no stable bracket around W* = " +
                       std::to_string(from.W_star));
  const double W = detail::bisect_delta(perturbed, lo, hi);
  if (std::fabs(w_map(perturbed, W) - W) > 1e-10)
    throw TrackingLost("track_root: tracked candidate fails fixed-point check");
  return W;
}

struct Derivatives {
  double dW = 0.0;
  double di_H = 0.0;
  double di_L = 0.0;
  double dpi_H = 0.0;
  double dpi_L = 0.0;
};

struct Verdict {
  bool applicable = false;  // a sign prediction exists for this primitive
  bool pass = true;
  std::string detail;
};

struct SensitivityReport {
  ModelParams economy;
  Equilibrium equilibrium;  // baseline focal (Pareto-dominant) equilibrium
  double step = 0.0;
  std::map<Primitive, Derivatives> derivatives;
  std::map<Primitive, Verdict> verdicts;
};

namespace detail {

// Slack for sign checks on central differences: bisection width 1e-13
// over a 2e-6 stencil leaves noise around 5e-8.
constexpr double kSignSlack = 1e-6;

struct TrackedPoint {
  double W, i_H, i_L, pi_H, pi_L;
};

inline TrackedPoint eval_at(const ModelParams& p, double W) {
  TrackedPoint t;
  t.W = W;
  t.i_H = best_response(p, TypeId::H, W);
  t.i_L = best_response(p, TypeId::L, W);
  t.pi_H = p.psi * t.i_H * t.i_H;
  t.pi_L = p.psi * t.i_L * t.i_L;
  return t;
}

inline Verdict judge(Primitive which, const Derivatives& d, bool corner) {
  Verdict v;
  const double s = kSignSlack;
  std::ostringstream why;
  switch (which) {
    case Primitive::YH:
    case Primitive::YL:
      v.applicable = true;
      if (!(d.dW >= -s)) why << "dW*/d" << to_string(which) << " = " << d.dW << " < 0; ";
      if (!(d.di_H <= s)) why << "di_H*/d" << to_string(which) << " = " << d.di_H << " > 0; ";
      if (!(d.di_L <= s)) why << "di_L*/d" << to_string(which) << " = " << d.di_L << " > 0; ";
      break;
    case Primitive::ThetaL:
      v.applicable = true;
      if (!(d.dW <= s)) why << "dW*/dtheta_L = " << d.dW << " > 0; ";
      if (!(d.di_H >= -s)) why << "di_H*/dtheta_L = " << d.di_H << " < 0; ";
      if (!(d.di_L >= -s)) why << "di_L*/dtheta_L = " << d.di_L << " < 0; ";
      break;
    case Primitive::ThetaH:
      v.applicable = true;
      if (!(d.dW >= -s)) why << "dW*/dtheta_H = " << d.dW << " < 0; ";
      if (!(d.di_L <= s)) why << "di_L*/dtheta_H = " << d.di_L << " > 0; ";
      if (corner) {
        // L-inactive: W* pinned at Y_H, only i_H responds.
        if (!(std::fabs(d.dW) <= s)) why << "corner dW*/dtheta_H = " << d.dW << " != 0; ";
        if (!(d.di_H >= -s)) why << "corner di_H*/dtheta_H = " << d.di_H << " < 0; ";
      }
      break;
    case Primitive::AlphaH:
    case Primitive::Psi:
      v.applicable = false;  // no sign prediction; derivative reported only
      break;
  }
  v.detail = why.str();
  v.pass = v.detail.empty();
  return v;
}

}  // namespace detail

// Central finite differences of (W*, i_k*, pi_k*) with respect to one
// primitive at the Pareto-dominant equilibrium. Both stencil points must
// yield valid economies and keep the tracked root inside its bracket.
inline SensitivityReport sensitivity(const ModelParams& params, Primitive which,
                                     double h = 1e-6) {
  if (!(h > 0.0 && h <= 1e-2)) throw InvalidStep("sensitivity: step must lie in (0, 1e-2]");
  validate(params);
  const EquilibriumSet base = find_equilibria(params);
  const Equilibrium focal = pareto_dominant(base);

  const double v0 = get_primitive(params, which);
  const ModelParams up = with_primitive(params, which, v0 + h);
  const ModelParams dn = with_primitive(params, which, v0 - h);
  if (!is_valid(up) || !is_valid(dn))
    throw InvalidStep("sensitivity: params invalid at " +
                      std::string(to_string(which)) + " +/- h");

  const double bracket = std::max(5e-4, 100.0 * h);
  const detail::TrackedPoint a = detail::eval_at(up, track_root(up, focal, bracket));
  const detail::TrackedPoint b = detail::eval_at(dn, track_root(dn, focal, bracket));
  Derivatives d;
  d.dW = (a.W - b.W) / (2.0 * h);
  d.di_H = (a.i_H - b.i_H) / (2.0 * h);
  d.di_L = (a.i_L - b.i_L) / (2.0 * h);
  d.dpi_H = (a.pi_H - b.pi_H) / (2.0 * h);
  d.dpi_L = (a.pi_L - b.pi_L) / (2.0 * h);

  SensitivityReport report;
  report.economy = params;
  report.equilibrium = focal;
  report.step = h;
  report.derivatives[which] = d;
  report.verdicts[which] =
      detail::judge(which, d, focal.activity == Activity::LInactive);
  return report;
}

// All six primitives in one report.
inline SensitivityReport sensitivity_all(const ModelParams& params,
                                         double h = 1e-6) {
  SensitivityReport report;
  bool first = true;
  for (Primitive which : kAllPrimitives) {
    SensitivityReport one = sensitivity(params, which, h);
    if (first) {
      report = one;
      first = false;
    } else {
      report.derivatives[which] = one.derivatives[which];
      report.verdicts[which] = one.verdicts[which];
    }
  }
  return report;
}

struct SignCheckFailure {
  ModelParams economy;
  std::string detail;
};

struct SignCheckSummary {
  std::size_t samples = 0;          // requested sample count
  std::size_t checked = 0;          // economies actually examined
  std::size_t resampled = 0;        // draws rejected (boundary / tracking)
  std::size_t primitive_checks = 0;
  std::size_t primitive_passes = 0;
  std::size_t joint_checks = 0;
  std::size_t joint_passes = 0;
  std::size_t corner_checks = 0;    // L-inactive focal, theta_H claim
  std::size_t corner_passes = 0;
  std::vector<SignCheckFailure> failures;

  bool all_passed() const { return failures.empty(); }
};

// Randomized battery over the full sign list plus the joint shift
// (theta_H raised by no more than theta_L): prevalence falls and both
// actions rise. Failures are collected verbatim, never thrown.
inline SignCheckSummary sign_check(std::size_t samples, std::uint64_t seed) {
  SignCheckSummary sum;
  sum.samples = samples;
  for (std::size_t n = 0; n < samples; ++n) {
    Rng rng = substream(seed, n);
    SampledEconomy econ;
    SensitivityReport report;
    bool ok = false;
    for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
      econ = draw_solvable_economy(rng);
      try {
        report = sensitivity_all(econ.params);
        ok = true;
      } catch (const SolverError&) {
        ++sum.resampled;
      }
    }
    if (!ok) continue;
    ++sum.checked;

    for (const auto& [which, verdict] : report.verdicts) {
      if (!verdict.applicable) continue;
      ++sum.primitive_checks;
      if (verdict.pass) {
        ++sum.primitive_passes;
      } else {
        sum.failures.push_back({econ.params, verdict.detail});
      }
    }

    const Equilibrium& focal = report.equilibrium;
    if (focal.activity == Activity::LInactive && focal.i_H > 1e-6) {
      ++sum.corner_checks;
      const Derivatives& d = report.derivatives.at(Primitive::ThetaH);
      if (std::fabs(d.dW) <= detail::kSignSlack && d.di_H > 0.0) {
        ++sum.corner_passes;
      } else {
        std::ostringstream why;
        why << "L-inactive theta_H claim failed: dW = " << d.dW
            << ", di_H = " << d.di_H;
        sum.failures.push_back({econ.params, why.str()});
      }
    }

    // Joint shift, small enough to keep the perturbed economy valid.
    const double eps2 = rng.uniform(1e-4, 5e-3);
    const double eps1 = eps2 * rng.uniform(0.1, 1.0);
    ModelParams shifted = econ.params;
    shifted.theta_H += eps1;
    shifted.theta_L += eps2;
    if (is_valid(shifted)) {
      try {
        const Equilibrium& focal0 = pareto_dominant(econ.set);
        const double W1 = track_root(shifted, focal0, 5e-3 + eps2);
        const detail::TrackedPoint after = detail::eval_at(shifted, W1);
        ++sum.joint_checks;
        const double s = detail::kSignSlack;
        if (after.W <= focal0.W_star + s && after.i_H >= focal0.i_H - s &&
            after.i_L >= focal0.i_L - s) {
          ++sum.joint_passes;
        } else {
          std::ostringstream why;
          why << "joint shift (+" << eps1 << ", +" << eps2
              << ") failed: W " << focal0.W_star << " -> " << after.W << ", i_H "
              << focal0.i_H << " -> " << after.i_H << ", i_L " << focal0.i_L
              << " -> " << after.i_L;
          sum.failures.push_back({econ.params, why.str()});
        }
      } catch (const SolverError&) {
        ++sum.resampled;  // transition crossed the joint-shift stencil
      }
    }
  }
  return sum;
}

struct PsiInvarianceSummary {
  bool pass = true;
  double max_W_deviation = 0.0;      // across factors, vs baseline multiset
  double max_scaling_deviation = 0.0;  // |i_k(f) - i_k/f|
  std::string detail;
};

// Rescaling psi must leave every W* unchanged and divide both-active
// actions by the factor; payoffs fall when the factor exceeds 1.
inline PsiInvarianceSummary psi_invariance_check(const ModelParams& params,
                                                 const std::vector<double>& factors) {
  validate(params);
  const EquilibriumSet base = find_equilibria(params);
  PsiInvarianceSummary sum;
  std::ostringstream why;
  for (double f : factors) {
    ModelParams scaled = params;
    scaled.psi *= f;
    validate(scaled);  // pre: scaled psi still satisfies interiority
    const EquilibriumSet re = find_equilibria(scaled);
    if (re.equilibria.size() != base.equilibria.size()) {
      why << "factor " << f << ": count " << base.equilibria.size() << " -> "
          << re.equilibria.size() << "; ";
      continue;
    }
    for (std::size_t i = 0; i < base.equilibria.size(); ++i) {
      const Equilibrium& b = base.equilibria[i];
      const Equilibrium& r = re.equilibria[i];
      const double dW = std::fabs(r.W_star - b.W_star);
      sum.max_W_deviation = std::max(sum.max_W_deviation, dW);
      if (dW > 1e-9) why << "factor " << f << ": W* moved by " << dW << "; ";
      const double dH = std::fabs(r.i_H - b.i_H / f);
      const double dL = std::fabs(r.i_L - b.i_L / f);
      sum.max_scaling_deviation = std::max(sum.max_scaling_deviation, std::max(dH, dL));
      if (std::max(dH, dL) > 1e-9)
        why << "factor " << f << ": i_k not scaled by 1/f (dev " << std::max(dH, dL)
            << "); ";
      if (f > 1.0 && (r.pi_H > b.pi_H + 1e-12 || r.pi_L > b.pi_L + 1e-12))
        why << "factor " << f << ": payoff rose under larger psi; ";
    }
  }
  sum.detail = why.str();
  sum.pass = sum.detail.empty();
  return sum;
}

enum class TransitionEvent { StableMaxWDisappeared, NewSmallestWAppeared, CountChanged };

inline const char* to_string(TransitionEvent e) {
  switch (e) {
    case TransitionEvent::StableMaxWDisappeared: return "stable_max_W_disappeared";
    case TransitionEvent::NewSmallestWAppeared: return "new_smallest_W_appeared";
    case TransitionEvent::CountChanged: return "count_changed";
  }
  return "?";
}

struct TransitionRecord {
  double param_value = 0.0;  // value of the varied primitive when detected
  TransitionEvent event = TransitionEvent::CountChanged;
};

struct TransitionReport {
  ModelParams start;
  ModelParams end;
  std::size_t steps = 0;
  std::optional<Primitive> varied;
  std::vector<TransitionRecord> events;
};

namespace detail {

inline bool near_any(const std::vector<Equilibrium>& eqs, double W, double radius) {
  for (const Equilibrium& e : eqs)
    if (std::fabs(e.W_star - W) <= radius) return true;
  return false;
}

// Events between two consecutive solves along a path.
inline void diff_events(const EquilibriumSet& prev, const EquilibriumSet& next,
                        double param_value, double radius,
                        std::vector<TransitionRecord>& out) {
  if (prev.equilibria.size() != next.equilibria.size())
    out.push_back({param_value, TransitionEvent::CountChanged});

  const Equilibrium* prev_stable_max = nullptr;
  for (const Equilibrium& e : prev.equilibria)
    if (e.stability == Stability::Stable) prev_stable_max = &e;  // sorted ascending
  if (prev_stable_max != nullptr &&
      !near_any(next.equilibria, prev_stable_max->W_star, radius))
    out.push_back({param_value, TransitionEvent::StableMaxWDisappeared});

  const Equilibrium* next_stable_min = nullptr;
  for (const Equilibrium& e : next.equilibria)
    if (e.stability == Stability::Stable) {
      next_stable_min = &e;
      break;
    }
  if (next_stable_min != nullptr &&
      !near_any(prev.equilibria, next_stable_min->W_star, radius))
    out.push_back({param_value, TransitionEvent::NewSmallestWAppeared});
}

}  // namespace detail

// Solves along the straight line from start to end and records every
// change in the equilibrium set: count changes, the stable equilibrium
// with the greatest W* vanishing, or a stable equilibrium with a new
// smallest W* appearing.
inline TransitionReport transition_scan(const ModelParams& start,
                                        const ModelParams& end,
                                        std::size_t steps) {
  if (steps < 100) throw PathInvalid("transition_scan: steps must be >= 100");
  std::string why = describe_invalid(start);
  if (!why.empty()) throw PathInvalid("transition_scan: start invalid: " + why);
  why = describe_invalid(end);
  if (!why.empty()) throw PathInvalid("transition_scan: end invalid: " + why);

  std::optional<Primitive> varied;
  for (Primitive which : kAllPrimitives) {
    if (get_primitive(start, which) != get_primitive(end, which)) {
      if (varied)
        throw PathInvalid("transition_scan: more than one primitive varies");
      varied = which;
    }
  }

  TransitionReport report;
  report.start = start;
  report.end = end;
  report.steps = steps;
  report.varied = varied;
  if (!varied) return report;  // null path

  const double span = std::fabs(get_primitive(end, *varied) -
                                get_primitive(start, *varied));
  const double radius = std::max(0.03, 5.0 * span / static_cast<double>(steps));

  auto params_at = [&](std::size_t k) {
    const double t = static_cast<double>(k) / static_cast<double>(steps);
    ModelParams p;
    p.alpha_H = start.alpha_H + t * (end.alpha_H - start.alpha_H);
    p.alpha_L = 1.0 - p.alpha_H;
    p.Y_H = start.Y_H + t * (end.Y_H - start.Y_H);
    p.Y_L = start.Y_L + t * (end.Y_L - start.Y_L);
    p.theta_H = start.theta_H + t * (end.theta_H - start.theta_H);
    p.theta_L = start.theta_L + t * (end.theta_L - start.theta_L);
    p.psi = start.psi + t * (end.psi - start.psi);
    return p;
  };

  EquilibriumSet prev;
  for (std::size_t k = 0; k <= steps; ++k) {
    const ModelParams p = params_at(k);
    why = describe_invalid(p);
    if (!why.empty())
      throw PathInvalid("transition_scan: params invalid at step " +
                        std::to_string(k) + ": " + why);
    EquilibriumSet current = find_equilibria(p);
    if (k > 0)
      detail::diff_events(prev, current, get_primitive(p, *varied), radius,
                          report.events);
    prev = std::move(current);
  }
  return report;
}

struct ScaledDeltaProbe {
  double gamma = 1.0;
  double epsilon = 0.0;
};

struct ScaledDeltaSummary {
  std::vector<double> roots;        // both-active roots below Y_H
  std::vector<double> derivatives;  // d delta(W0, gamma)/d gamma at gamma = 1
  bool all_positive = true;
};

// At every both-active root W0 < Y_H the scaled delta must increase in
// gamma (checked by central differencing at gamma = 1).
inline ScaledDeltaSummary scaled_delta_derivative_check(const ModelParams& params,
                                                        const ScaledDeltaProbe& probe) {
  if (!(probe.epsilon > 0.0))
    throw std::invalid_argument("scaled_delta_derivative_check: epsilon must be > 0");
  if (!(probe.gamma > 0.0))
    throw std::invalid_argument("scaled_delta_derivative_check: gamma must be > 0");
  const EquilibriumSet set = find_equilibria(params);
  ScaledDeltaSummary sum;
  const double h = 1e-6;
  for (const Equilibrium& eq : set.equilibria) {
    if (eq.activity != Activity::BothActive || eq.W_star >= params.Y_H - 1e-12)
      continue;
    const double up = delta_scaled(params, eq.W_star, 1.0 + h, probe.epsilon);
    const double dn = delta_scaled(params, eq.W_star, 1.0 - h, probe.epsilon);
    const double slope = (up - dn) / (2.0 * h);
    sum.roots.push_back(eq.W_star);
    sum.derivatives.push_back(slope);
    if (!(slope > 0.0)) sum.all_positive = false;
  }
  return sum;
}

}  // namespace matchpool

#endif  // MATCHPOOL_STATICS_HPP
