#include "cdasim/estimator.hpp"

#include <cmath>
#include <string>

namespace cdasim {

void EstimatorParams::validate() const {
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw ConfigError("kappa in [0,1] violated");
  if (!(sigma_s_sq >= 0.0)) throw ConfigError("sigma_s_sq >= 0 violated");
  if (!(sigma_n_sq >= 0.0)) throw ConfigError("sigma_n_sq >= 0 violated");
  if (horizon < 0) throw ConfigError("horizon >= 0 violated");
}

AdvanceWeights advance_weights(double kappa, TimeStep delta) {
  const double d = static_cast<double>(delta);
  if (kappa == 0.0) return {1.0, 1.0, d};
  if (kappa == 1.0) return {0.0, 0.0, 1.0};
  // log1p/expm1 keep the ratio accurate for kappa near zero.
  const double log_keep = std::log1p(-kappa);
  const double mean_weight = std::exp(d * log_keep);
  const double prior_weight = std::exp(2.0 * d * log_keep);
  const double shock_weight = std::expm1(2.0 * d * log_keep) / std::expm1(2.0 * log_keep);
  return {mean_weight, prior_weight, shock_weight};
}

BeliefState advance(const BeliefState& belief, TimeStep now, const EstimatorParams& params) {
  if (now < belief.last_wake)
    throw OrderingError("belief advanced backwards: " + std::to_string(now) + " < " +
                        std::to_string(belief.last_wake));
  const TimeStep delta = now - belief.last_wake;
  if (delta == 0) return belief;
  const auto w = advance_weights(params.kappa, delta);
  BeliefState next;
  next.r_tilde = (1.0 - w.mean_weight) * params.r_bar + w.mean_weight * belief.r_tilde;
  next.sigma_tilde_sq = w.prior_weight * belief.sigma_tilde_sq + w.shock_weight * params.sigma_s_sq;
  next.last_wake = now;
  return next;
}

BeliefState observe(const BeliefState& belief, double observation, const EstimatorParams& params) {
  const double noise = params.sigma_n_sq;
  const double prior = belief.sigma_tilde_sq;
  const double total = noise + prior;
  BeliefState next = belief;
  if (total == 0.0) {
    // Both sources claim exactness; adopt the observation.
    next.r_tilde = observation;
    next.sigma_tilde_sq = 0.0;
    return next;
  }
  // The prior is weighted by the observation noise and the observation by the prior error.
  next.r_tilde = (noise / total) * belief.r_tilde + (prior / total) * observation;
  next.sigma_tilde_sq = noise * prior / total;
  return next;
}

double project_final(const BeliefState& belief, const EstimatorParams& params) {
  const TimeStep remaining = params.horizon - belief.last_wake;
  if (remaining <= 0) return belief.r_tilde;
  const double w = advance_weights(params.kappa, remaining).mean_weight;
  return (1.0 - w) * params.r_bar + w * belief.r_tilde;
}

} // namespace cdasim
