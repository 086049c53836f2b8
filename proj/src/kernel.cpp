#include "cdasim/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace cdasim {

std::vector<TimeStep> schedule_arrivals(double arrival_rate, TimeStep horizon, Rng& rng) {
  if (!(arrival_rate > 0.0)) throw std::invalid_argument("arrival_rate must be > 0");
  std::vector<TimeStep> out;
  double clock = 0.0;
  for (;;) {
    clock += rng.exponential(arrival_rate);
    if (!(clock <= static_cast<double>(horizon))) break;
    auto step = static_cast<TimeStep>(std::ceil(clock));
    if (!out.empty() && step <= out.back()) step = out.back() + 1;
    if (step > horizon) break;
    out.push_back(step);
  }
  return out;
}

Ticks mark_observation(Ticks true_value, double sigma_n_sq, const PriceScale& scale, Rng& rng) {
  const double noisy = scale.to_real(true_value) + std::sqrt(sigma_n_sq) * rng.normal();
  return std::max<Ticks>(0, scale.nearest(noisy));
}

namespace {

struct AgentState {
  AgentId id;
  const AgentGroup* group;
  Rng rng;
  PrivateValues pv;
  BeliefState belief;
  EstimatorParams estimator;
  Ticks cash{0};
  int q{0};
  std::optional<OrderId> open;
  std::size_t wakes{0};
};

} // namespace

SimResult run(const SimConfig& config) {
  config.validate();
  const auto scale = config.scale();
  const TimeStep horizon = config.horizon;
  const auto seed = config.master_seed;

  SimResult result;
  result.scale = scale;
  result.warnings = config.warnings();
  for (const char* label : {"fundamental", "megashock-arrivals", "megashock-sizes"})
    result.seeds[label] = derive_seed(seed, label);

  // The fundamental is walked on every step before any agent acts, so its path
  // depends only on the seed and its own parameters.
  auto source = make_fundamental(config);
  std::vector<Ticks> path(static_cast<std::size_t>(horizon) + 1);
  for (TimeStep t = 0; t <= horizon; ++t) path[static_cast<std::size_t>(t)] = source.value_at(t);
  for (TimeStep t = 0; t <= horizon; t += config.output.fundamental_interval)
    result.fundamental.emplace_back(t, path[static_cast<std::size_t>(t)]);
  if (result.fundamental.back().first != horizon) result.fundamental.emplace_back(horizon, path.back());

  const EstimatorParams base_estimator = estimator_params(config);
  std::vector<AgentState> agents;
  std::vector<std::pair<TimeStep, AgentId>> wakes;
  for (const auto& group : config.agents) {
    for (int k = 0; k < group.count; ++k) {
      const auto id = static_cast<AgentId>(agents.size());
      const std::string agent_label = "agent-" + std::to_string(id);
      const std::string arrival_label = "arrivals-" + std::to_string(id);
      result.seeds[agent_label] = derive_seed(seed, agent_label);
      result.seeds[arrival_label] = derive_seed(seed, arrival_label);

      Rng arrivals(seed, arrival_label);
      for (TimeStep t : schedule_arrivals(group.arrival_rate, horizon, arrivals)) wakes.emplace_back(t, id);

      Rng rng(seed, agent_label);
      auto pv = draw_private_values(group.zi().q_max, group.zi().sigma_pv_sq, rng);
      EstimatorParams est = base_estimator;
      est.sigma_n_sq = group.zi().sigma_n_sq;
      agents.push_back(AgentState{id, &group, std::move(rng), std::move(pv), BeliefState::initial(est), est, 0, 0, {}, 0});
    }
  }
  std::sort(wakes.begin(), wakes.end());

  OrderBook book;
  OrderId next_order = 1;
  auto& inv = result.invariants;

  const auto check_accounts = [&](TimeStep t) {
    Ticks cash = 0;
    long long q = 0;
    for (const auto& a : agents) {
      cash += a.cash;
      q += a.q;
      if (std::abs(a.q) > a.pv.q_max())
        inv.violations.push_back("t=" + std::to_string(t) + ": agent " + std::to_string(a.id) + " holds " +
                                 std::to_string(a.q) + " beyond q_max");
    }
    if (cash != 0) inv.violations.push_back("t=" + std::to_string(t) + ": cash does not sum to zero");
    if (q != 0) inv.violations.push_back("t=" + std::to_string(t) + ": holdings do not sum to zero");
  };

  for (const auto& [t, id] : wakes) {
    auto& agent = agents[static_cast<std::size_t>(id)];
    ++agent.wakes;
    ++inv.wakes;

    if (agent.open) {
      book.cancel(*agent.open, t);
      agent.open.reset();
    }

    const Ticks observation = mark_observation(path[static_cast<std::size_t>(t)], agent.estimator.sigma_n_sq, scale,
                                               agent.rng);
    const TimeStep delta = t - agent.belief.last_wake;
    agent.belief = observe(advance(agent.belief, t, agent.estimator), scale.to_real(observation), agent.estimator);
    const double r_hat = project_final(agent.belief, agent.estimator);
    if (config.output.trace_estimator)
      result.estimator_trace.push_back(
          {t, id, delta, observation, agent.belief.r_tilde, agent.belief.sigma_tilde_sq, r_hat});

    const MarketView market{book.best_bid(), book.best_ask()};
    const auto& group = *agent.group;
    AgentAction action;
    if (group.strategy == Strategy::Zi) {
      action = zi_decide(agent.q, agent.pv, r_hat, market, group.zi(), scale, agent.rng);
    } else {
      // Classification cannot reach L trades before L trades exist.
      const bool enough = book.trades().size() >= static_cast<std::size_t>(group.hbl.memory_length);
      const auto window = book.events().subspan(book.window_start(static_cast<std::size_t>(group.hbl.memory_length)));
      const HblMemory memory = enough ? hbl_classify(window, t, group.hbl) : HblMemory{};
      action = hbl_decide(agent.q, agent.pv, r_hat, memory, market, group.hbl, scale, agent.rng);
    }
    if (config.output.trace_decisions) result.decision_trace.push_back({t, id, group.strategy, action});
    if (action.kind == AgentAction::Kind::Skip) continue;

    const Order order{next_order++, id, action.side, action.limit, 1, t};
    const std::size_t trades_before = book.trades().size();
    book.place_limit(order, t);
    const auto trades = book.trades();
    for (std::size_t i = trades_before; i < trades.size(); ++i) {
      const auto& trade = trades[i];
      auto& buyer = agents[static_cast<std::size_t>(trade.buyer)];
      auto& seller = agents[static_cast<std::size_t>(trade.seller)];
      const Ticks notional = trade.price * trade.quantity;
      buyer.cash -= notional;
      buyer.q += static_cast<int>(trade.quantity);
      seller.cash += notional;
      seller.q -= static_cast<int>(trade.quantity);
      for (auto* side : {&buyer, &seller})
        if (side->open && !book.is_resting(*side->open)) side->open.reset();
      ++inv.trades_checked;
      check_accounts(t);
    }
    if (book.is_resting(order.id)) agent.open = order.id;
    if (book.crossed()) inv.violations.push_back("t=" + std::to_string(t) + ": book crossed");
  }

  result.final_fundamental = path.back();
  const double r_final = scale.to_real(result.final_fundamental);
  for (auto& a : agents) {
    AgentOutcome out;
    out.id = a.id;
    out.strategy = a.group->strategy;
    out.cash_ticks = a.cash;
    out.q_held = a.q;
    out.wakes = a.wakes;
    out.payoff = scale.to_real(a.cash) + a.q * r_final + a.pv.realized(a.q);
    out.private_values = std::move(a.pv);
    result.agents.push_back(std::move(out));
  }
  result.events.assign(book.events().begin(), book.events().end());
  result.trades.assign(book.trades().begin(), book.trades().end());
  return result;
}

} // namespace cdasim
