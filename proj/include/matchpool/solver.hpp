#ifndef MATCHPOOL_SOLVER_HPP
#define MATCHPOOL_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "matchpool/model.hpp"

// Equilibrium enumeration and classification. Candidates come from sign
// changes of delta on a dense grid over [Y_L, Y_H] plus the analytic
// corner W = Y_H; every candidate is validated against the w-map before
// it is accepted, which discards the spurious delta zero at W = theta_H.

namespace matchpool {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidTolerance : SolverError {
  using SolverError::SolverError;
};
struct BracketExhausted : SolverError {
  using SolverError::SolverError;
};
struct DegenerateRoot : SolverError {
  using SolverError::SolverError;
};

enum class Activity { BothActive, LInactive };
enum class Stability { Stable, Unstable };
enum class RegimeTag { UniqueBothActive, Coexistence, UniqueLInactive, Boundary };

inline const char* to_string(Activity a) {
  return a == Activity::BothActive ? "both_active" : "L_inactive";
}
inline const char* to_string(Stability s) {
  return s == Stability::Stable ? "stable" : "unstable";
}
inline const char* to_string(RegimeTag t) {
  switch (t) {
    case RegimeTag::UniqueBothActive: return "unique_both_active";
    case RegimeTag::Coexistence: return "coexistence";
    case RegimeTag::UniqueLInactive: return "unique_L_inactive";
    case RegimeTag::Boundary: return "boundary";
  }
  return "?";
}

struct Equilibrium {
  double W_star = 0.0;
  double i_H = 0.0;
  double i_L = 0.0;
  double pi_H = 0.0;
  double pi_L = 0.0;
  Activity activity = Activity::BothActive;
  Stability stability = Stability::Stable;
  double residual = 0.0;  // |w(W*) - W*|
};

// Evaluated existence/uniqueness conditions. corner_margin is
// alpha_H * (threshold - Y_H): positive means the both-active quadratic
// has a positive root sum; discriminant decides whether the pair of
// both-active roots is real.
struct RegimeClass {
  RegimeTag tag = RegimeTag::Boundary;
  double y_gap = 0.0;          // Y_H - theta_L
  double corner_margin = 0.0;  // theta_L - alpha_H*(theta_H-theta_L) - alpha_L*Y_L - alpha_H*Y_H
  double discriminant = 0.0;   // corner_margin^2 - 4*alpha_H*(theta_H-theta_L)*(Y_H-theta_L)
};

struct EquilibriumSet {
  ModelParams economy;
  std::vector<Equilibrium> equilibria;  // sorted ascending by W_star
  RegimeClass regime;
};

namespace detail {

// Bisection on delta, driven to machine precision. Roots adjacent to
// the theta_L kink can have a very steep w-map, so anything coarser
// than full refinement leaves fixed-point residuals above tolerance.
inline double bisect_delta(const ModelParams& p, double lo, double hi) {
  double f_lo = delta(p, lo);
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval is one ulp wide
    const double f_mid = delta(p, mid);
    if (f_mid == 0.0) return mid;
    if ((f_lo < 0.0) == (f_mid < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline void dedupe_sorted(std::vector<double>& xs, double tol) {
  std::sort(xs.begin(), xs.end());
  std::vector<double> out;
  for (double x : xs) {
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  }
  xs.swap(out);
}

}  // namespace detail

// Stability of a validated fixed point. Interior roots (W* < theta_L)
// are classified by the slope of the w-map, stable iff w' < 1; the
// stencil shrinks near the theta_L kink so both evaluations stay on the
// both-active branch. Roots at or above theta_L sit on the constant
// branch w = Y_H, where w' = 0.
inline Stability classify_stability(const ModelParams& p, double W_star,
                                    double h = 1e-6) {
  if (!(h > 0.0)) throw InvalidTolerance("classify_stability: step must be > 0");
  if (W_star >= p.theta_L) return Stability::Stable;
  double step = std::min(h, 0.45 * (p.theta_L - W_star));
  if (step < 1e-11) return Stability::Stable;  // effectively at the corner
  const double slope =
      (w_map(p, W_star + step) - w_map(p, W_star - step)) / (2.0 * step);
  if (std::fabs(slope - 1.0) < std::max(10.0 * h, 1e-5))
    throw DegenerateRoot("classify_stability: |w' - 1| below resolution at W* = " +
                         std::to_string(W_star) + " (tangency)");
  return slope < 1.0 ? Stability::Stable : Stability::Unstable;
}

// Regime prediction from the primitives alone, no solve needed.
// boundary_tol flags knife-edge economies where any deciding inequality
// is within tolerance of equality.
inline RegimeClass predict_regime(const ModelParams& p,
                                  double boundary_tol = 1e-9) {
  validate(p);
  RegimeClass rc;
  rc.y_gap = p.Y_H - p.theta_L;
  rc.corner_margin = p.theta_L - p.alpha_H * (p.theta_H - p.theta_L) -
                     p.alpha_L * p.Y_L - p.alpha_H * p.Y_H;
  rc.discriminant = rc.corner_margin * rc.corner_margin -
                    4.0 * p.alpha_H * (p.theta_H - p.theta_L) * rc.y_gap;
  if (std::fabs(rc.y_gap) <= boundary_tol) {
    rc.tag = RegimeTag::Boundary;
    return rc;
  }
  if (rc.y_gap < 0.0) {
    rc.tag = RegimeTag::UniqueBothActive;
    return rc;
  }
  if (std::fabs(rc.corner_margin) <= boundary_tol ||
      std::fabs(rc.discriminant) <= boundary_tol) {
    rc.tag = RegimeTag::Boundary;
    return rc;
  }
  rc.tag = (rc.corner_margin > 0.0 && rc.discriminant > 0.0)
               ? RegimeTag::Coexistence
               : RegimeTag::UniqueLInactive;
  return rc;
}

// Enumerates all equilibria of one economy.
//
//  (a) bracket every sign change of delta on a uniform grid over
//      [Y_L, Y_H] and refine by bisection;
//  (b) inject the corner candidate W = Y_H whenever theta_L <= Y_H
//      (delta has a tangent zero there, invisible to sign scans);
//  (c) keep only candidates with |w(W) - W| <= tol, which drops the
//      spurious delta zero at W = theta_H;
//  (d) attach best responses, payoffs, activity and stability.
inline EquilibriumSet find_equilibria(const ModelParams& p, double tol = 1e-10,
                                      std::size_t grid_points = 10000) {
  validate(p);
  if (!(tol > 0.0 && tol <= 1e-4))
    throw InvalidTolerance("find_equilibria: tol must lie in (0, 1e-4]");
  if (grid_points < 100)
    throw InvalidTolerance("find_equilibria: grid_points must be >= 100");

  const double lo = p.Y_L, hi = p.Y_H;
  const double span = hi - lo;
  const std::size_t n = grid_points;

  std::vector<double> candidates;
  double prev_W = lo;
  double prev_f = delta(p, prev_W);
  if (prev_f == 0.0) candidates.push_back(prev_W);
  for (std::size_t k = 1; k < n; ++k) {
    const double W =
        k == n - 1 ? hi : lo + span * static_cast<double>(k) / static_cast<double>(n - 1);
    const double f = delta(p, W);
    if (f == 0.0) {
      candidates.push_back(W);
    } else if (prev_f != 0.0 && (f < 0.0) != (prev_f < 0.0)) {
      candidates.push_back(detail::bisect_delta(p, prev_W, W));
    }
    prev_W = W;
    prev_f = f;
  }
  if (p.theta_L <= p.Y_H) candidates.push_back(p.Y_H);
  detail::dedupe_sorted(candidates, std::max(10.0 * tol, 1e-11));

  EquilibriumSet set;
  set.economy = p;
  set.regime = predict_regime(p);
  for (double W : candidates) {
    const double residual = std::fabs(w_map(p, W) - W);
    if (residual > tol) continue;  // spurious candidate, e.g. W = theta_H
    Equilibrium eq;
    eq.W_star = W;
    eq.i_H = best_response(p, TypeId::H, W);
    eq.i_L = best_response(p, TypeId::L, W);
    eq.pi_H = p.psi * eq.i_H * eq.i_H;
    eq.pi_L = p.psi * eq.i_L * eq.i_L;
    eq.activity = eq.i_L > 0.0 ? Activity::BothActive : Activity::LInactive;
    eq.stability = classify_stability(p, W);
    eq.residual = residual;
    set.equilibria.push_back(eq);
  }
  std::sort(set.equilibria.begin(), set.equilibria.end(),
            [](const Equilibrium& a, const Equilibrium& b) {
              return a.W_star < b.W_star;
            });
  if (set.equilibria.empty())
    throw BracketExhausted("find_equilibria: no validated fixed point (numerical defect)");
  if (set.equilibria.size() > 3)
    throw BracketExhausted("find_equilibria: more than 3 validated roots (numerical defect)");
  return set;
}

// The stable equilibrium with the smallest W*. It Pareto dominates: both
// types' payoffs weakly exceed their payoffs in every other equilibrium.
inline const Equilibrium& pareto_dominant(const EquilibriumSet& set) {
  if (set.equilibria.empty())
    throw SolverError("pareto_dominant: empty equilibrium set");
  for (const Equilibrium& eq : set.equilibria)
    if (eq.stability == Stability::Stable) return eq;
  // delta increases at its smallest zero, so this is unreachable for
  // validated sets; guard anyway.
  throw SolverError("pareto_dominant: no stable equilibrium found");
}

// Independent check of find_equilibria: scan the fixed-point residual
// |w(W) - W| itself on a dense uniform grid, keep local minimizers with
// small residual, refine by bisection on delta when a sign change
// brackets the minimizer. Grid-resolution tolerance, no analytic corner
// injection.
inline std::vector<double> brute_force_equilibria(const ModelParams& p,
                                                  std::size_t grid_points = 100000) {
  validate(p);
  if (grid_points < 100000)
    throw InvalidTolerance("brute_force_equilibria: grid_points must be >= 1e5");

  const double lo = p.Y_L, hi = p.Y_H;
  const double span = hi - lo;
  const std::size_t n = grid_points;
  const double spacing = span / static_cast<double>(n - 1);
  const double coarse_tol = 50.0 * spacing;

  std::vector<double> grid_W(n), resid(n);
  for (std::size_t k = 0; k < n; ++k) {
    grid_W[k] = lo + span * static_cast<double>(k) / static_cast<double>(n - 1);
    resid[k] = std::fabs(w_map(p, grid_W[k]) - grid_W[k]);
  }

  std::vector<double> roots;
  for (std::size_t k = 0; k < n; ++k) {
    const bool left_ok = (k == 0) || resid[k] <= resid[k - 1];
    const bool right_ok = (k + 1 == n) || resid[k] <= resid[k + 1];
    if (!(left_ok && right_ok && resid[k] < coarse_tol)) continue;
    const std::size_t a = (k == 0) ? 0 : k - 1;
    const std::size_t b = (k + 1 == n) ? k : k + 1;
    const double f_a = delta(p, grid_W[a]);
    const double f_b = delta(p, grid_W[b]);
    double W = grid_W[k];
    if (f_a != 0.0 && f_b != 0.0 && (f_a < 0.0) != (f_b < 0.0))
      W = detail::bisect_delta(p, grid_W[a], grid_W[b]);
    if (std::fabs(w_map(p, W) - W) <= 1e-8) roots.push_back(W);
  }
  // steep roots near the theta_L kink can hide from the residual scan;
  // a delta sign change pins them regardless of the w-map slope
  double prev_f = delta(p, grid_W[0]);
  for (std::size_t k = 1; k < n; ++k) {
    const double f = delta(p, grid_W[k]);
    if (prev_f != 0.0 && f != 0.0 && (f < 0.0) != (prev_f < 0.0)) {
      const double W = detail::bisect_delta(p, grid_W[k - 1], grid_W[k]);
      if (std::fabs(w_map(p, W) - W) <= 1e-8) roots.push_back(W);
    }
    prev_f = f;
  }
  detail::dedupe_sorted(roots, 10.0 * spacing);
  return roots;
}

}  // namespace matchpool

#endif  // MATCHPOOL_SOLVER_HPP
