#include "cdasim/agents.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "cdasim/spline.hpp"

namespace cdasim {

void ZiParams::validate() const {
  if (!(r_min >= 0.0 && r_min <= r_max)) throw ConfigError("0 <= r_min <= r_max violated");
  if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("eta in [0,1] violated");
  if (!(sigma_n_sq >= 0.0)) throw ConfigError("sigma_n_sq >= 0 violated");
  if (q_max < 1) throw ConfigError("q_max >= 1 violated");
  if (!(sigma_pv_sq >= 0.0)) throw ConfigError("sigma_pv_sq >= 0 violated");
}

void HblParams::validate() const {
  zi.validate();
  if (memory_length < 1) throw ConfigError("memory_length >= 1 violated");
  if (grace_period < 1) throw ConfigError("grace_period >= 1 violated");
  if (grid_extension < 0) throw ConfigError("grid_extension >= 0 violated");
}

const char* to_string(AgentAction::Kind k) noexcept {
  switch (k) {
  case AgentAction::Kind::Place: return "PLACE";
  case AgentAction::Kind::Take: return "TAKE";
  case AgentAction::Kind::Skip: return "SKIP";
  }
  return "?";
}

std::optional<Side> choose_side(int q_held, const PrivateValues& pv, Rng& rng) {
  Side side = rng.coin() ? Side::Buy : Side::Sell;
  const auto allowed = [&](Side s) { return s == Side::Buy ? pv.can_buy(q_held) : pv.can_sell(q_held); };
  if (!allowed(side)) side = opposite(side);
  if (!allowed(side)) return std::nullopt;
  return side;
}

AgentAction zi_limit(Side side, double valuation, double requested_surplus, const MarketView& market, double eta,
                     const PriceScale& scale) {
  AgentAction action;
  action.side = side;
  action.valuation = valuation;
  action.requested_surplus = requested_surplus;
  const double v = valuation;
  const double r = requested_surplus;
  // Threshold compared in real arithmetic, before any tick rounding.
  const double slack = PriceScale::kSnap * scale.tick_size;

  if (side == Side::Buy) {
    if (market.best_ask && v - scale.to_real(*market.best_ask) >= eta * r - slack) {
      action.kind = AgentAction::Kind::Take;
      action.limit = *market.best_ask;
    } else {
      action.kind = AgentAction::Kind::Place;
      action.limit = std::max<Ticks>(0, scale.floor(v - r));
    }
  } else {
    if (market.best_bid && scale.to_real(*market.best_bid) - v >= eta * r - slack) {
      action.kind = AgentAction::Kind::Take;
      action.limit = *market.best_bid;
    } else {
      action.kind = AgentAction::Kind::Place;
      action.limit = std::max<Ticks>(0, scale.ceil(v + r));
    }
  }
  return action;
}

AgentAction zi_decide(int q_held, const PrivateValues& pv, double r_hat, const MarketView& market,
                      const ZiParams& params, const PriceScale& scale, Rng& rng) {
  const auto side = choose_side(q_held, pv, rng);
  if (!side) return AgentAction::skip();
  const double requested = rng.uniform(params.r_min, params.r_max);
  return zi_limit(*side, total_valuation(pv, q_held, *side, r_hat), requested, market, params.eta, scale);
}

// ---- HBL memory ----

HblMemory hbl_classify(std::span<const BookEvent> events, TimeStep now, const HblParams& params) {
  const auto wanted = static_cast<std::size_t>(params.memory_length);

  // Walk back to the last L trades and the placements of every order involved in them.
  std::unordered_set<std::int64_t> trade_ids;
  std::unordered_set<OrderId> involved;
  std::unordered_set<OrderId> placed_found;
  std::size_t start = 0;
  bool complete = false;
  for (std::size_t i = events.size(); i-- > 0;) {
    const auto& e = events[i];
    if (e.kind == EventKind::Executed) {
      if (trade_ids.contains(e.trade_id)) {
        involved.insert(e.order_id);
      } else if (trade_ids.size() < wanted) {
        trade_ids.insert(e.trade_id);
        involved.insert(e.order_id);
      }
    } else if (e.kind == EventKind::Placed && involved.contains(e.order_id)) {
      placed_found.insert(e.order_id);
      if (trade_ids.size() == wanted && placed_found.size() == involved.size()) {
        start = i;
        complete = true;
        break;
      }
    }
  }
  if (complete) {
    const TimeStep start_time = events[start].time;
    while (start > 0 && events[start - 1].time >= start_time) --start;
  }

  struct Track {
    OrderOutcome outcome;
    std::optional<TimeStep> first_fill;
    std::optional<TimeStep> cancelled;
  };
  std::vector<Track> tracks;
  std::unordered_map<OrderId, std::size_t> position;
  tracks.reserve(events.size() - start);
  position.reserve(events.size() - start);

  TimeStep prev = start < events.size() ? events[start].time : 0;
  for (std::size_t i = start; i < events.size(); ++i) {
    const auto& e = events[i];
    if (e.time < prev) throw std::invalid_argument("book log is not time ordered");
    if (e.time > now) throw std::invalid_argument("book log contains events after the classification time");
    prev = e.time;
    if (e.kind == EventKind::Placed) {
      if (position.contains(e.order_id))
        throw std::invalid_argument("order " + std::to_string(e.order_id) + " placed twice");
      position.emplace(e.order_id, tracks.size());
      tracks.push_back({OrderOutcome{e.order_id, e.side, e.price, e.time, 0.0, 0.0}, {}, {}});
      continue;
    }
    auto it = position.find(e.order_id);
    if (it == position.end()) continue; // placed before the window
    auto& track = tracks[it->second];
    if (track.cancelled)
      throw std::invalid_argument("order " + std::to_string(e.order_id) + " has events after cancellation");
    if (e.kind == EventKind::Executed) {
      if (!track.first_fill) track.first_fill = e.time;
    } else {
      track.cancelled = e.time;
    }
  }

  const double grace = static_cast<double>(params.grace_period);
  HblMemory memory;
  memory.transactions = trade_ids.size();
  memory.window_start = start < events.size() ? events[start].time : now;
  memory.orders.reserve(tracks.size());
  for (auto& track : tracks) {
    auto& o = track.outcome;
    if (params.success_mode == SuccessMode::Binary) {
      if (track.first_fill) {
        o.success = 1.0;
      } else if (track.cancelled || now - o.placed_at > params.grace_period) {
        o.failure = 1.0;
      }
    } else {
      if (track.first_fill) {
        const double alive = static_cast<double>(*track.first_fill - o.placed_at);
        o.success = std::max(0.0, 1.0 - alive / grace);
        o.failure = 1.0 - o.success;
      } else {
        const double alive = static_cast<double>(track.cancelled.value_or(now) - o.placed_at);
        o.failure = std::min(1.0, alive / grace);
      }
    }
    memory.orders.push_back(o);
  }
  return memory;
}

// ---- belief function ----

BeliefFunction::BeliefFunction(const HblMemory& memory, Side side) : side_(side) {
  std::vector<std::pair<Ticks, double>> support, failures;
  for (const auto& o : memory.orders) {
    if (o.side == side) {
      support.emplace_back(o.price, o.success);
      failures.emplace_back(o.price, o.failure);
    } else {
      support.emplace_back(o.price, 1.0);
    }
  }
  const auto accumulate = [](std::vector<std::pair<Ticks, double>>& raw, std::vector<Weighted>& out) {
    std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    double running = 0.0;
    out.reserve(raw.size());
    for (const auto& [price, w] : raw) {
      running += w;
      out.push_back({price, running});
    }
  };
  accumulate(support, support_);
  accumulate(failures, failures_);
}

namespace {

template <class V>
double sum_at_or_below(const V& cumulative, Ticks p) {
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), p,
                             [](Ticks x, const auto& w) { return x < w.price; });
  return it == cumulative.begin() ? 0.0 : std::prev(it)->cumulative;
}

template <class V>
double sum_at_or_above(const V& cumulative, Ticks p) {
  if (cumulative.empty()) return 0.0;
  auto it = std::lower_bound(cumulative.begin(), cumulative.end(), p,
                             [](const auto& w, Ticks x) { return w.price < x; });
  const double below = it == cumulative.begin() ? 0.0 : std::prev(it)->cumulative;
  return cumulative.back().cumulative - below;
}

} // namespace

double BeliefFunction::support(Ticks p) const {
  return side_ == Side::Buy ? sum_at_or_below(support_, p) : sum_at_or_above(support_, p);
}

double BeliefFunction::failures(Ticks p) const {
  return side_ == Side::Buy ? sum_at_or_above(failures_, p) : sum_at_or_below(failures_, p);
}

double BeliefFunction::operator()(Ticks p) const {
  const double num = support(p);
  const double den = num + failures(p);
  return den > 0.0 ? num / den : 0.0;
}

double hbl_belief(const HblMemory& memory, Ticks p, Side side) { return BeliefFunction(memory, side)(p); }

// ---- candidate prices ----

std::vector<Ticks> hbl_candidate_grid(const HblMemory& memory, GridMode mode, int extension) {
  std::vector<Ticks> observed;
  observed.reserve(memory.orders.size());
  for (const auto& o : memory.orders) observed.push_back(o.price);
  std::sort(observed.begin(), observed.end());
  observed.erase(std::unique(observed.begin(), observed.end()), observed.end());
  if (observed.empty()) return observed;

  const Ticks lo = std::max<Ticks>(0, observed.front() - extension);
  const Ticks hi = observed.back() + extension;
  if (mode == GridMode::Spline) {
    std::vector<Ticks> grid;
    grid.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (Ticks p = lo; p <= hi; ++p) grid.push_back(p);
    return grid;
  }
  std::vector<Ticks> grid;
  grid.reserve(observed.size() + 2);
  if (lo < observed.front()) grid.push_back(lo);
  grid.insert(grid.end(), observed.begin(), observed.end());
  if (hi > observed.back()) grid.push_back(hi);
  return grid;
}

CandidateTable hbl_candidate_table(const HblMemory& memory, Side side, GridMode mode, int extension) {
  CandidateTable table;
  table.prices = hbl_candidate_grid(memory, mode, extension);
  if (table.prices.empty()) return table;
  const BeliefFunction belief(memory, side);
  table.belief.reserve(table.prices.size());
  if (mode == GridMode::Observed) {
    for (Ticks p : table.prices) table.belief.push_back(belief(p));
    return table;
  }
  const auto knots = hbl_candidate_grid(memory, GridMode::Observed, 0);
  std::vector<double> xs, ys;
  for (Ticks p : knots) {
    xs.push_back(static_cast<double>(p));
    ys.push_back(belief(p));
  }
  const NaturalCubicSpline spline(xs, ys);
  for (Ticks p : table.prices) table.belief.push_back(std::clamp(spline(static_cast<double>(p)), 0.0, 1.0));
  return table;
}

HblChoice hbl_best_price(const CandidateTable& table, Side side, double valuation, const PriceScale& scale) {
  if (table.prices.empty()) throw std::invalid_argument("empty candidate table");
  const bool buying = side == Side::Buy;
  HblChoice best;
  for (std::size_t i = 0; i < table.prices.size(); ++i) {
    const double p = scale.to_real(table.prices[i]);
    const double expected = (buying ? valuation - p : p - valuation) * table.belief[i];
    // Prices ascend: strict > keeps the lowest price for a buyer, >= the highest for a seller.
    if (i == 0 || expected > best.expected_surplus || (!buying && expected == best.expected_surplus))
      best = {table.prices[i], expected, table.belief[i]};
  }
  return best;
}

AgentAction hbl_decide(int q_held, const PrivateValues& pv, double r_hat, const HblMemory& memory,
                       const MarketView& market, const HblParams& params, const PriceScale& scale, Rng& rng) {
  if (memory.transactions < static_cast<std::size_t>(params.memory_length) || memory.empty()) {
    auto action = zi_decide(q_held, pv, r_hat, market, params.zi, scale, rng);
    action.fallback = true;
    return action;
  }
  const auto side = choose_side(q_held, pv, rng);
  if (!side) return AgentAction::skip();

  AgentAction action;
  action.kind = AgentAction::Kind::Place;
  action.side = *side;
  action.valuation = total_valuation(pv, q_held, *side, r_hat);
  const auto table = hbl_candidate_table(memory, *side, params.grid_mode, params.grid_extension);
  action.grid_size = table.prices.size();
  const auto best = hbl_best_price(table, *side, action.valuation, scale);
  action.limit = best.price;
  action.expected_surplus = best.expected_surplus;
  action.belief = best.belief;
  return action;
}

} // namespace cdasim
