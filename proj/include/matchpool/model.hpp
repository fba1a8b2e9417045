#ifndef MATCHPOOL_MODEL_HPP
#define MATCHPOOL_MODEL_HPP

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

// Core primitives of the two-type partner-search model: parameters,
// payoffs, best responses, the pooled-prevalence map and its sign
// transform delta. Everything here is a pure function of its arguments.

namespace matchpool {

enum class TypeId { H, L };

// The seven primitives defining one economy.
struct ModelParams {
  double alpha_H = 0.0;  // population share of high types
  double alpha_L = 0.0;  // population share of low types
  double Y_H = 0.0;      // infected fraction among high types
  double Y_L = 0.0;      // infected fraction among low types
  double theta_H = 0.0;  // marginal match benefit, high type
  double theta_L = 0.0;  // marginal match benefit, low type
  double psi = 0.0;      // satiation (quadratic search cost) coefficient
};

struct ActionProfile {
  double i_H = 0.0;
  double i_L = 0.0;
};

// Population-average infection rate alpha_H*Y_H + alpha_L*Y_L.
// Every equilibrium prevalence is bounded below by this.
inline double mean_infection(const ModelParams& p) {
  return p.alpha_H * p.Y_H + p.alpha_L * p.Y_L;
}

// Returns an empty string when params are valid, otherwise a diagnostic
// naming the violated inequality. Validation is strict: callers reject,
// never clamp.
//
// Interiority: the sufficient condition used here is
//   psi >= (theta_H - mean_infection)/2,
// which bounds best responses by 1 at every attainable equilibrium
// prevalence (W* >= mean infection). The blunter bound
// psi >= (theta_H - Y_L)/2 would reject economies whose equilibria are
// perfectly interior.
inline std::string describe_invalid(const ModelParams& p) {
  std::ostringstream msg;
  const auto fail = [&msg]() { return msg.str(); };
  if (!(p.alpha_H > 0.0)) {
    msg << "alpha_H > 0 violated (alpha_H = " << p.alpha_H << ")";
    return fail();
  }
  if (!(p.alpha_L > 0.0)) {
    msg << "alpha_L > 0 violated (alpha_L = " << p.alpha_L << ")";
    return fail();
  }
  if (!(std::fabs(p.alpha_H + p.alpha_L - 1.0) <= 1e-12)) {
    msg << "alpha_H + alpha_L = 1 violated (sum = " << p.alpha_H + p.alpha_L
        << ")";
    return fail();
  }
  if (!(p.Y_L >= 0.0)) {
    msg << "Y_L >= 0 violated (Y_L = " << p.Y_L << ")";
    return fail();
  }
  if (!(p.Y_L < p.Y_H)) {
    msg << "Y_L < Y_H violated (Y_L = " << p.Y_L << ", Y_H = " << p.Y_H << ")";
    return fail();
  }
  if (!(p.Y_H <= 1.0)) {
    msg << "Y_H <= 1 violated (Y_H = " << p.Y_H << ")";
    return fail();
  }
  if (!(p.theta_L > 0.0)) {
    msg << "theta_L > 0 violated (theta_L = " << p.theta_L << ")";
    return fail();
  }
  if (!(p.theta_H > p.theta_L)) {
    msg << "theta_H > theta_L violated (theta_H = " << p.theta_H
        << ", theta_L = " << p.theta_L << ")";
    return fail();
  }
  if (!(p.theta_H > p.Y_L)) {
    msg << "theta_H > Y_L violated (theta_H = " << p.theta_H
        << ", Y_L = " << p.Y_L << ")";
    return fail();
  }
  if (!(p.psi > 0.0)) {
    msg << "psi > 0 violated (psi = " << p.psi << ")";
    return fail();
  }
  if (!(p.psi >= 0.5 * (p.theta_H - mean_infection(p)))) {
    msg << "interiority psi >= (theta_H - alpha_H*Y_H - alpha_L*Y_L)/2 "
           "violated (psi = "
        << p.psi << ", bound = " << 0.5 * (p.theta_H - mean_infection(p))
        << ")";
    return fail();
  }
  return std::string();
}

inline bool is_valid(const ModelParams& p) { return describe_invalid(p).empty(); }

inline void validate(const ModelParams& p) {
  std::string why = describe_invalid(p);
  if (!why.empty()) throw std::invalid_argument("invalid ModelParams: " + why);
}

inline double benefit(const ModelParams& p, TypeId k) {
  return k == TypeId::H ? p.theta_H : p.theta_L;
}

inline double infection_rate(const ModelParams& p, TypeId k) {
  return k == TypeId::H ? p.Y_H : p.Y_L;
}

// Prevalence among active partner-seekers given the chosen match
// probabilities. An empty pool carries the worst belief Y_H, which is
// what sustains no-activity equilibria.
inline double pooled_prevalence(const ModelParams& p, const ActionProfile& a) {
  validate(p);
  if (!(a.i_H >= 0.0 && a.i_H <= 1.0 && a.i_L >= 0.0 && a.i_L <= 1.0))
    throw std::invalid_argument("pooled_prevalence: actions must lie in [0,1]");
  // i_L = 0 leaves only high types (or nobody) in the pool; either way
  // the prevalence is exactly Y_H.
  if (a.i_L <= 0.0) return p.Y_H;
  const double mass = p.alpha_H * a.i_H + p.alpha_L * a.i_L;
  return (p.alpha_H * a.i_H * p.Y_H + p.alpha_L * a.i_L * p.Y_L) / mass;
}

// pi_k(i) = i*theta_k - psi*i^2 - i*W.
inline double payoff(const ModelParams& p, TypeId k, double i, double W) {
  return i * benefit(p, k) - p.psi * i * i - i * W;
}

// FOC of the quadratic payoff: i_k = max{0, (theta_k - W) / (2 psi)}.
inline double best_response(const ModelParams& p, TypeId k, double W) {
  return std::max(0.0, (benefit(p, k) - W) / (2.0 * p.psi));
}

inline ActionProfile best_responses(const ModelParams& p, double W) {
  return ActionProfile{best_response(p, TypeId::H, W),
                       best_response(p, TypeId::L, W)};
}

// Prevalence induced when both types best-respond to a conjectured W.
// The 2*psi factor cancels from the ratio, so the map is evaluated with
// the raw FOC weights; it equals Y_H for every W >= theta_L (only H in
// the pool, or nobody). Total on any finite W.
inline double w_map(const ModelParams& p, double W) {
  const double weight_H = p.alpha_H * std::max(0.0, p.theta_H - W);
  const double weight_L = p.alpha_L * std::max(0.0, p.theta_L - W);
  if (weight_L <= 0.0) return p.Y_H;  // L inactive or pool empty: exactly Y_H
  return (weight_H * p.Y_H + weight_L * p.Y_L) / (weight_H + weight_L);
}

// Sign transform of W - w(W): same zeroes on W < theta_H, piecewise
// quadratic, cheap to bracket. delta(Y_L) < 0 <= delta(Y_H) for every
// valid economy.
inline double delta(const ModelParams& p, double W) {
  return p.alpha_H * (p.theta_H - W) * (W - p.Y_H) +
         p.alpha_L * std::max(0.0, p.theta_L - W) * (W - p.Y_L);
}

// delta with the high-type term scaled by gamma*(1-epsilon) and the
// low-type term by gamma. Used to probe how uniform benefit shifts move
// the root set.
inline double delta_scaled(const ModelParams& p, double W, double gamma,
                           double epsilon) {
  if (!(gamma > 0.0)) throw std::invalid_argument("delta_scaled: gamma must be > 0");
  if (!(epsilon >= 0.0))
    throw std::invalid_argument("delta_scaled: epsilon must be >= 0");
  return p.alpha_H * gamma * (1.0 - epsilon) * (p.theta_H - W) * (W - p.Y_H) +
         p.alpha_L * gamma * std::max(0.0, p.theta_L - W) * (W - p.Y_L);
}

}  // namespace matchpool

#endif  // MATCHPOOL_MODEL_HPP
