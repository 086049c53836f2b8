#pragma once
// Reference implementations used only by tests. Each one is written in the most
// direct form available (step-by-step loops, full rescans) so that it shares no
// shortcuts with the library code it checks.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <list>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cdasim/agents.hpp"
#include "cdasim/estimator.hpp"
#include "cdasim/orderbook.hpp"

namespace oracle {

using namespace cdasim;

// Scalar Kalman filter for x_t = kappa*r_bar + (1-kappa)*x_{t-1} + u_t, observed as
// x_t + n_t. The prediction is run one step at a time.
struct Kalman {
  double mean;
  double var{0.0};
  TimeStep t{0};
  double kappa, r_bar, q, r;

  Kalman(const EstimatorParams& p) : mean(p.r_bar), kappa(p.kappa), r_bar(p.r_bar), q(p.sigma_s_sq), r(p.sigma_n_sq) {}

  void predict_to(TimeStep now) {
    for (; t < now; ++t) {
      mean = kappa * r_bar + (1.0 - kappa) * mean;
      var = (1.0 - kappa) * (1.0 - kappa) * var + q;
    }
  }

  void update(double obs) {
    const double s = var + r;
    if (s == 0.0) {
      mean = obs;
      var = 0.0;
      return;
    }
    const double gain = var / s;
    mean += gain * (obs - mean);
    var = (1.0 - gain) * var;
  }

  double forecast(TimeStep horizon) const {
    double m = mean;
    for (TimeStep k = t; k < horizon; ++k) m = kappa * r_bar + (1.0 - kappa) * m;
    return m;
  }
};

// The three stages of the belief heuristic for a buyer, over bids only.
struct Bid {
  double price;
  bool success;
};

// S_p / (S_p + U_p); nullopt where the ratio is 0/0.
inline std::optional<double> stage_exact(const std::vector<Bid>& bids, double p) {
  double s = 0, u = 0;
  for (const auto& b : bids)
    if (b.price == p) (b.success ? s : u) += 1;
  if (s + u == 0) return std::nullopt;
  return s / (s + u);
}

// S_{<=p} / (S_{<=p} + U_{<=p})
inline std::optional<double> stage_at_or_below(const std::vector<Bid>& bids, double p) {
  double s = 0, u = 0;
  for (const auto& b : bids)
    if (b.price <= p) (b.success ? s : u) += 1;
  if (s + u == 0) return std::nullopt;
  return s / (s + u);
}

// S_{<=p} / (S_{<=p} + U_{>=p})
inline std::optional<double> stage_split(const std::vector<Bid>& bids, double p) {
  double s = 0, u = 0;
  for (const auto& b : bids) {
    if (b.success && b.price <= p) s += 1;
    if (!b.success && b.price >= p) u += 1;
  }
  if (s + u == 0) return std::nullopt;
  return s / (s + u);
}

// Ten failed bids at 5, ten successful at 7 and ten successful at 9.
inline std::vector<Bid> ten_ten_ten() {
  std::vector<Bid> bids;
  for (int i = 0; i < 10; ++i) bids.push_back({5, false});
  for (int i = 0; i < 10; ++i) bids.push_back({7, true});
  for (int i = 0; i < 10; ++i) bids.push_back({9, true});
  return bids;
}

// Belief by rescanning every remembered order for every query.
inline double belief_rescan(const HblMemory& memory, Ticks p, Side side) {
  double num = 0.0, fail = 0.0;
  for (const auto& o : memory.orders) {
    const bool favourable = side == Side::Buy ? o.price <= p : o.price >= p;
    const bool against = side == Side::Buy ? o.price >= p : o.price <= p;
    if (o.side != side) {
      if (favourable) num += 1.0;
    } else {
      if (favourable) num += o.success;
      if (against) fail += o.failure;
    }
  }
  return num + fail > 0.0 ? num / (num + fail) : 0.0;
}

// The worked limit-price example: four trades on a 0.1 tick grid, no cancellations.
// Orders are placed one per step in table order; matched pairs share a trade.
struct ScriptedOrder {
  Side side;
  Ticks price;
};

inline std::vector<ScriptedOrder> worked_example_script() {
  const auto B = Side::Buy;
  const auto S = Side::Sell;
  return {
    {S, 1000}, {B, 998},  {S, 1003}, {B, 996},  {B, 1000}, // trade 1
    {S, 1002}, {B, 1000}, {S, 1003}, {B, 1001}, {B, 1002}, // trade 2
    {B, 1001}, {S, 999},                                   // trade 3
    {B, 1002}, {S, 1004}, {B, 1004},                       // trade 4
  };
}

inline OrderBook play(const std::vector<ScriptedOrder>& script) {
  OrderBook book;
  TimeStep t = 1;
  OrderId id = 1;
  for (const auto& s : script) {
    book.place_limit(Order{id, static_cast<AgentId>(id), s.side, s.price, 1, t}, t);
    ++id;
    ++t;
  }
  return book;
}

// Naive matching engine: a flat list of resting orders scanned in full for each
// arrival. Best price wins, then earliest arrival.
class ListBook {
public:
  std::vector<BookEvent> place(const Order& in, TimeStep now) {
    std::vector<BookEvent> out;
    out.push_back({EventKind::Placed, now, in.id, in.agent, in.side, in.limit, in.quantity, -1, -1});
    std::int64_t left = in.quantity;
    while (left > 0) {
      auto best = resting_.end();
      for (auto it = resting_.begin(); it != resting_.end(); ++it) {
        if (it->side == in.side) continue;
        const bool crosses = in.side == Side::Buy ? it->limit <= in.limit : it->limit >= in.limit;
        if (!crosses) continue;
        if (best == resting_.end()) {
          best = it;
          continue;
        }
        const bool better = in.side == Side::Buy ? it->limit < best->limit : it->limit > best->limit;
        if (better) best = it; // equal prices keep the earlier order
      }
      if (best == resting_.end()) break;
      const std::int64_t q = std::min(left, best->quantity);
      const auto trade = next_trade_++;
      out.push_back({EventKind::Executed, now, best->id, best->agent, best->side, best->limit, q, in.id, trade});
      out.push_back({EventKind::Executed, now, in.id, in.agent, in.side, best->limit, q, best->id, trade});
      left -= q;
      best->quantity -= q;
      if (best->quantity == 0) resting_.erase(best);
    }
    if (left > 0) {
      Order rest = in;
      rest.quantity = left;
      resting_.push_back(rest);
    }
    return out;
  }

  std::optional<BookEvent> cancel(OrderId id, TimeStep now) {
    for (auto it = resting_.begin(); it != resting_.end(); ++it) {
      if (it->id != id) continue;
      BookEvent e{EventKind::Cancelled, now, it->id, it->agent, it->side, it->limit, it->quantity, -1, -1};
      resting_.erase(it);
      return e;
    }
    return std::nullopt;
  }

  const std::list<Order>& resting() const { return resting_; }

private:
  std::list<Order> resting_;
  std::int64_t next_trade_{0};
};

// Discrete mean-reverting series written straight from the recurrence.
inline std::vector<Ticks> dmr_path(double r_bar, double kappa, double sigma_s_sq, double tick, TimeStep horizon,
                                   Rng& rng) {
  std::vector<Ticks> out{static_cast<Ticks>(std::llround(r_bar / tick))};
  for (TimeStep t = 1; t <= horizon; ++t) {
    const double prev = static_cast<double>(out.back()) * tick;
    const double next = kappa * r_bar + (1.0 - kappa) * prev + std::sqrt(sigma_s_sq) * rng.normal();
    out.push_back(std::max<Ticks>(0, static_cast<Ticks>(std::llround(next / tick))));
  }
  return out;
}

// Drives a random order stream through OrderBook and ListBook side by side and
// returns every property violation found.
inline std::vector<std::string> check_random_stream(std::uint64_t seed, int operations) {
  std::vector<std::string> bad;
  Rng rng(seed);
  OrderBook book;
  ListBook ref;
  std::vector<OrderId> live;
  OrderId next_id = 1;
  TimeStep t = 0;
  const int agents = 1 + static_cast<int>(rng.uniform() * 6);
  for (int op = 0; op < operations; ++op) {
    if (rng.uniform() < 0.7) ++t;
    const bool cancel = !live.empty() && rng.uniform() < 0.25;
    std::vector<BookEvent> got, want;
    if (cancel) {
      const auto pick = static_cast<std::size_t>(rng.uniform() * static_cast<double>(live.size()));
      const OrderId id = live[pick];
      const auto a = book.cancel(id, t);
      const auto b = ref.cancel(id, t);
      if (a.has_value() != b.has_value() || (a && !(*a == *b))) bad.push_back("cancel mismatch");
      if (a) got.push_back(*a);
      if (b) want.push_back(*b);
    } else {
      const Order o{next_id++, static_cast<AgentId>(rng.uniform() * agents),
                    rng.coin() ? Side::Buy : Side::Sell, 990 + static_cast<Ticks>(rng.uniform() * 21),
                    1 + static_cast<std::int64_t>(rng.uniform() * 3), t};
      got = book.place_limit(o, t);
      want = ref.place(o, t);
      live.push_back(o.id);
    }
    if (got != want) bad.push_back("event mismatch at operation " + std::to_string(op));
    if (book.crossed()) bad.push_back("crossed book at operation " + std::to_string(op));
    std::erase_if(live, [&](OrderId id) { return !book.is_resting(id); });
  }

  // Resting queues agree with the reference, level by level in arrival order.
  std::map<std::pair<int, Ticks>, std::vector<OrderId>> expect;
  for (const auto& o : ref.resting()) expect[{static_cast<int>(o.side), o.limit}].push_back(o.id);
  std::map<std::pair<int, Ticks>, std::vector<OrderId>> have;
  for (const auto& level : book.snapshot())
    for (const auto& o : level.queue) have[{static_cast<int>(level.side), level.price}].push_back(o.id);
  if (have != expect) bad.push_back("resting queues differ from reference");

  // Conservation: cash and units net to zero across agents.
  std::map<AgentId, std::int64_t> cash, units;
  for (const auto& tr : book.trades()) {
    cash[tr.buyer] -= tr.price * tr.quantity;
    cash[tr.seller] += tr.price * tr.quantity;
    units[tr.buyer] += tr.quantity;
    units[tr.seller] -= tr.quantity;
  }
  std::int64_t cash_sum = 0, unit_sum = 0;
  for (const auto& [a, c] : cash) cash_sum += c;
  for (const auto& [a, u] : units) unit_sum += u;
  if (cash_sum != 0 || unit_sum != 0) bad.push_back("cash or units not conserved");

  for (std::size_t i = 1; i < book.events().size(); ++i)
    if (book.events()[i].time < book.events()[i - 1].time) bad.push_back("event times decrease");

  const auto replayed = replay(book.events());
  if (replayed.snapshot() != book.snapshot() || replayed.best_bid() != book.best_bid() ||
      replayed.best_ask() != book.best_ask())
    bad.push_back("replay differs");
  return bad;
}

} // namespace oracle
