#ifndef MATCHPOOL_SAMPLER_HPP
#define MATCHPOOL_SAMPLER_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "matchpool/solver.hpp"

// Deterministic random economies for property tests and the verify
// battery. The generator is hand-rolled (splitmix64) so that output is
// bit-identical across standard libraries, and every sample index can
// be turned into an independent substream for order-free merging.

namespace matchpool {

struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1) with 53 random bits
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }
};

// Independent substream for sample n of a seeded batch.
inline Rng substream(std::uint64_t seed, std::uint64_t n) {
  Rng mix(seed ^ (0xd1342543de82ef95ULL * (n + 1)));
  mix.next();
  return mix;
}

// One draw from the test distribution. May be invalid (theta_H <= Y_L
// comes up); callers reject and redraw.
inline ModelParams draw_economy_raw(Rng& rng) {
  ModelParams p;
  p.alpha_H = rng.uniform(0.05, 0.95);
  p.alpha_L = 1.0 - p.alpha_H;
  p.Y_L = rng.uniform(0.0, 0.5);
  p.Y_H = rng.uniform(p.Y_L + 0.05, 1.0);
  p.theta_L = rng.uniform(0.05, 1.0);
  p.theta_H = rng.uniform(p.theta_L + 0.01, p.theta_L + 1.0);
  p.psi = std::max(0.5 * (p.theta_H - p.Y_L), 0.05) * rng.uniform(1.0, 3.0);
  return p;
}

inline ModelParams draw_economy(Rng& rng) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    ModelParams p = draw_economy_raw(rng);
    if (is_valid(p)) return p;
  }
  throw std::runtime_error("draw_economy: rejection sampling stalled");
}

// Margins used to keep sampled economies away from knife edges, where
// regime predictions, finite differences and root tracking are all
// ill-conditioned. The margins are wider than the solver's Boundary
// tolerance on purpose.
struct BoundaryMargins {
  double regime = 1e-3;        // |Y_H - theta_L| and |corner_margin|
  double discriminant = 1e-4;  // both-active pair near tangency
  double root_gap = 1e-3;      // distance between adjacent roots
  double kink_gap = 1e-3;      // distance of interior roots to theta_L
};

inline bool is_boundary_like(const ModelParams& p,
                             const BoundaryMargins& m = BoundaryMargins{}) {
  const RegimeClass rc = predict_regime(p);
  if (std::fabs(rc.y_gap) < m.regime) return true;
  if (rc.y_gap > 0.0 &&
      (std::fabs(rc.corner_margin) < m.regime ||
       std::fabs(rc.discriminant) < m.discriminant))
    return true;
  return false;
}

struct SampledEconomy {
  ModelParams params;
  EquilibriumSet set;
};

// Draws until the economy is valid, clearly inside one regime, and its
// solved equilibria sit away from each other and from the theta_L kink.
inline SampledEconomy draw_solvable_economy(
    Rng& rng, const BoundaryMargins& m = BoundaryMargins{}) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    ModelParams p = draw_economy_raw(rng);
    if (!is_valid(p) || is_boundary_like(p, m)) continue;
    EquilibriumSet set;
    try {
      set = find_equilibria(p);
    } catch (const SolverError&) {
      continue;  // degenerate tangency slipped through the margins
    }
    bool clean = true;
    for (std::size_t i = 0; i + 1 < set.equilibria.size(); ++i)
      if (set.equilibria[i + 1].W_star - set.equilibria[i].W_star < m.root_gap)
        clean = false;
    for (const Equilibrium& eq : set.equilibria)
      if (eq.W_star < p.theta_L && p.theta_L - eq.W_star < m.kink_gap)
        clean = false;
    if (!clean) continue;
    return SampledEconomy{p, std::move(set)};
  }
  throw std::runtime_error("draw_solvable_economy: rejection sampling stalled");
}

}  // namespace matchpool

#endif  // MATCHPOOL_SAMPLER_HPP
