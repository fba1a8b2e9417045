#ifndef MATCHPOOL_TWOPOP_HPP
#define MATCHPOOL_TWOPOP_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "matchpool/model.hpp"
#include "matchpool/solver.hpp"

// Two populations (f and m) matching across, each with its own H/L
// types. Type k in population g best-responds to the prevalence in the
// other population's pool, scaled by the cross cost factor beta_g; own
// prevalence W_g is formed from own choices. Equilibrium is mutual
// consistency of (W_f, W_m), found by damped fixed-point iteration from
// a grid of seeds.

namespace matchpool {

enum class Pop { f, m };

struct TwoPopParams {
  ModelParams f;
  ModelParams m;
  double beta_f = 1.0;  // multiplies W_m in population f's match cost
  double beta_m = 1.0;  // multiplies W_f in population m's match cost
};

inline const ModelParams& slice(const TwoPopParams& p, Pop g) {
  return g == Pop::f ? p.f : p.m;
}
inline double beta_of(const TwoPopParams& p, Pop g) {
  return g == Pop::f ? p.beta_f : p.beta_m;
}
inline Pop other(Pop g) { return g == Pop::f ? Pop::m : Pop::f; }

// Per-slice invariants mirror the single-population ones, with the
// interiority bound adjusted for the effective cost beta_g * W_other:
// the other pool's prevalence never falls below its population-average
// infection rate.
inline std::string describe_invalid(const TwoPopParams& p) {
  for (Pop g : {Pop::f, Pop::m}) {
    const ModelParams& own = slice(p, g);
    const char* label = g == Pop::f ? "population f: " : "population m: ";
    if (!(beta_of(p, g) > 0.0))
      return std::string(label) + "beta > 0 violated";
    ModelParams probe = own;
    probe.psi = 1e300;  // interiority checked separately below
    std::string why = describe_invalid(probe);
    if (!why.empty()) return label + why;
    if (!(own.psi > 0.0)) return std::string(label) + "psi > 0 violated";
    const double bound =
        0.5 * (own.theta_H - beta_of(p, g) * mean_infection(slice(p, other(g))));
    if (!(own.psi >= bound))
      return std::string(label) +
             "interiority psi >= (theta_H - beta*mean cross infection)/2 violated";
  }
  return std::string();
}

inline bool is_valid(const TwoPopParams& p) { return describe_invalid(p).empty(); }

inline void validate(const TwoPopParams& p) {
  const std::string why = describe_invalid(p);
  if (!why.empty()) throw std::invalid_argument("invalid TwoPopParams: " + why);
}

// Best responses of population g to the other pool's prevalence, and
// the prevalence of g's own pool that those responses induce. The ratio
// form of the pooled prevalence makes this the single-population w-map
// of the slice evaluated at the effective prevalence beta_g * W_other.
inline std::pair<ActionProfile, double> two_pop_response(const TwoPopParams& p,
                                                         double W_other, Pop g) {
  if (!(W_other >= 0.0 && W_other <= 1.0))
    throw std::invalid_argument("two_pop_response: W_other must lie in [0,1]");
  const ModelParams& own = slice(p, g);
  const double effective = beta_of(p, g) * W_other;
  ActionProfile a{best_response(own, TypeId::H, effective),
                  best_response(own, TypeId::L, effective)};
  return {a, w_map(own, effective)};
}

struct TwoPopEquilibrium {
  double W_f = 0.0;
  double W_m = 0.0;
  double i_fH = 0.0, i_fL = 0.0;
  double i_mH = 0.0, i_mL = 0.0;
  double pi_fH = 0.0, pi_fL = 0.0;
  double pi_mH = 0.0, pi_mL = 0.0;
  double residual = 0.0;  // max of the two fixed-point errors
  Stability stability = Stability::Stable;
};

struct TwoPopDiagnostics {
  std::size_t seeds_total = 0;
  std::size_t seeds_discarded = 0;  // hit max_iter without converging
};

struct TwoPopSolution {
  std::vector<TwoPopEquilibrium> equilibria;
  TwoPopDiagnostics diagnostics;
};

namespace twopop_detail {

struct Point {
  double W_f, W_m;
};

inline Point apply_map(const TwoPopParams& p, const Point& x) {
  return Point{two_pop_response(p, x.W_m, Pop::f).second,
               two_pop_response(p, x.W_f, Pop::m).second};
}

inline double residual_at(const TwoPopParams& p, const Point& x) {
  const Point y = apply_map(p, x);
  return std::max(std::fabs(y.W_f - x.W_f), std::fabs(y.W_m - x.W_m));
}

// Damped iteration; returns true on convergence to residual < tol.
inline bool iterate(const TwoPopParams& p, Point& x, double tol,
                    std::size_t max_iter) {
  for (std::size_t it = 0; it < max_iter; ++it) {
    const Point y = apply_map(p, x);
    const double res = std::max(std::fabs(y.W_f - x.W_f), std::fabs(y.W_m - x.W_m));
    if (res < tol) return true;
    x.W_f = 0.5 * (x.W_f + y.W_f);
    x.W_m = 0.5 * (x.W_m + y.W_m);
  }
  return false;
}

}  // namespace twopop_detail

// Finds fixed points of (W_f, W_m) -> (response to W_m, response to W_f)
// from a grid of seeds over [Y_fL, Y_fH] x [Y_mL, Y_mH] with damping 0.5,
// deduplicates the converged points, and classifies each as Stable when
// iteration returns to it from four perturbed seeds.
inline TwoPopSolution solve_two_pop(const TwoPopParams& p, double tol = 1e-10,
                                    std::size_t max_iter = 500,
                                    std::size_t grid_n = 21) {
  validate(p);
  if (!(tol > 0.0 && tol <= 1e-4))
    throw InvalidTolerance("solve_two_pop: tol must lie in (0, 1e-4]");
  if (grid_n < 2) throw InvalidTolerance("solve_two_pop: grid_n must be >= 2");

  using twopop_detail::Point;
  TwoPopSolution sol;
  std::vector<Point> found;
  for (std::size_t a = 0; a < grid_n; ++a) {
    for (std::size_t b = 0; b < grid_n; ++b) {
      ++sol.diagnostics.seeds_total;
      Point x;
      x.W_f = p.f.Y_L + (p.f.Y_H - p.f.Y_L) * static_cast<double>(a) /
                            static_cast<double>(grid_n - 1);
      x.W_m = p.m.Y_L + (p.m.Y_H - p.m.Y_L) * static_cast<double>(b) /
                            static_cast<double>(grid_n - 1);
      if (!twopop_detail::iterate(p, x, tol, max_iter)) {
        ++sol.diagnostics.seeds_discarded;
        continue;
      }
      bool duplicate = false;
      for (const Point& q : found)
        if (std::fabs(q.W_f - x.W_f) <= 10.0 * tol &&
            std::fabs(q.W_m - x.W_m) <= 10.0 * tol)
          duplicate = true;
      if (!duplicate) found.push_back(x);
    }
  }

  std::sort(found.begin(), found.end(), [](const Point& a, const Point& b) {
    return a.W_f != b.W_f ? a.W_f < b.W_f : a.W_m < b.W_m;
  });

  for (const Point& q : found) {
    TwoPopEquilibrium eq;
    eq.W_f = q.W_f;
    eq.W_m = q.W_m;
    const auto [af, wf] = two_pop_response(p, q.W_m, Pop::f);
    const auto [am, wm] = two_pop_response(p, q.W_f, Pop::m);
    eq.i_fH = af.i_H;
    eq.i_fL = af.i_L;
    eq.i_mH = am.i_H;
    eq.i_mL = am.i_L;
    eq.pi_fH = p.f.psi * af.i_H * af.i_H;
    eq.pi_fL = p.f.psi * af.i_L * af.i_L;
    eq.pi_mH = p.m.psi * am.i_H * am.i_H;
    eq.pi_mL = p.m.psi * am.i_L * am.i_L;
    eq.residual = std::max(std::fabs(wf - q.W_f), std::fabs(wm - q.W_m));

    bool stable = true;
    const double d = 100.0 * tol;
    const Point probes[4] = {{q.W_f + d, q.W_m}, {q.W_f - d, q.W_m},
                             {q.W_f, q.W_m + d}, {q.W_f, q.W_m - d}};
    for (const Point& seed : probes) {
      Point x = seed;
      x.W_f = std::clamp(x.W_f, 0.0, 1.0);
      x.W_m = std::clamp(x.W_m, 0.0, 1.0);
      if (!twopop_detail::iterate(p, x, tol, max_iter) ||
          std::fabs(x.W_f - q.W_f) > 10.0 * tol ||
          std::fabs(x.W_m - q.W_m) > 10.0 * tol) {
        stable = false;
        break;
      }
    }
    eq.stability = stable ? Stability::Stable : Stability::Unstable;
    sol.equilibria.push_back(eq);
  }
  return sol;
}

}  // namespace matchpool

#endif  // MATCHPOOL_TWOPOP_HPP
