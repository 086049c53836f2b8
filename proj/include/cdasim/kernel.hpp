#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cdasim/agents.hpp"
#include "cdasim/config.hpp"
#include "cdasim/estimator.hpp"
#include "cdasim/orderbook.hpp"
#include "cdasim/preferences.hpp"

namespace cdasim {

// Poisson wake times: cumulative exponential gaps rounded up to whole steps, bumped
// to stay strictly increasing, truncated at the horizon.
std::vector<TimeStep> schedule_arrivals(double arrival_rate, TimeStep horizon, Rng& rng);

// Noisy private observation of the true fundamental, rounded to tick and floored at 0.
Ticks mark_observation(Ticks true_value, double sigma_n_sq, const PriceScale& scale, Rng& rng);

struct AgentOutcome {
  AgentId id{0};
  Strategy strategy{Strategy::Zi};
  Ticks cash_ticks{0};
  int q_held{0};
  double payoff{0.0};
  std::size_t wakes{0};
  PrivateValues private_values{};
};

struct EstimatorTraceRow {
  TimeStep time;
  AgentId agent;
  TimeStep delta;
  Ticks observation;
  double r_tilde;
  double sigma_tilde_sq;
  double r_hat;
};

struct DecisionTraceRow {
  TimeStep time;
  AgentId agent;
  Strategy strategy;
  AgentAction action;
};

struct InvariantSummary {
  std::size_t trades_checked{0};
  std::size_t wakes{0};
  std::vector<std::string> violations;

  bool ok() const noexcept { return violations.empty(); }
};

struct SimResult {
  PriceScale scale{};
  Ticks final_fundamental{0};
  std::vector<AgentOutcome> agents;
  std::vector<BookEvent> events;
  std::vector<Trade> trades;
  std::vector<std::pair<TimeStep, Ticks>> fundamental;
  std::vector<EstimatorTraceRow> estimator_trace;
  std::vector<DecisionTraceRow> decision_trace;
  InvariantSummary invariants;
  std::vector<std::string> warnings;
  std::map<std::string, std::uint64_t> seeds;
};

// Runs one simulation. Wakes are served in (time, agent id) order; at each wake the
// agent cancels its open order, observes, updates its belief and decides.
SimResult run(const SimConfig& config);

} // namespace cdasim
