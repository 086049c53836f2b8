#pragma once
#include "cdasim/types.hpp"

namespace cdasim {

// What a tuned agent knows about the fundamental process. All values are real
// currency units; beliefs are never rounded to ticks.
struct EstimatorParams {
  double r_bar{100.0};
  double kappa{0.05};
  double sigma_s_sq{0.01};
  double sigma_n_sq{1.0};
  TimeStep horizon{1000};

  void validate() const;
  bool operator==(const EstimatorParams&) const = default;
};

// Estimate of the current fundamental and the agent's error variance of that estimate.
struct BeliefState {
  double r_tilde{0.0};
  double sigma_tilde_sq{0.0};
  TimeStep last_wake{0};

  static BeliefState initial(const EstimatorParams& p) noexcept { return {p.r_bar, 0.0, 0}; }
  bool operator==(const BeliefState&) const = default;
};

// Weights applied by an advance of `delta` steps:
//   mean_weight  = (1-kappa)^delta
//   prior_weight = (1-kappa)^(2 delta)
//   shock_weight = (1 - (1-kappa)^(2 delta)) / (1 - (1-kappa)^2), or delta when kappa = 0
struct AdvanceWeights {
  double mean_weight;
  double prior_weight;
  double shock_weight;
};
AdvanceWeights advance_weights(double kappa, TimeStep delta);

// Mean reversion of the belief from last_wake to now with no observation.
BeliefState advance(const BeliefState& belief, TimeStep now, const EstimatorParams& params);

// Blend in an observation taken at belief.last_wake.
BeliefState observe(const BeliefState& belief, double observation, const EstimatorParams& params);

// Forecast of the final fundamental r_T from the current belief.
double project_final(const BeliefState& belief, const EstimatorParams& params);

} // namespace cdasim
