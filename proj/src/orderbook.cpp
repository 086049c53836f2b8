#include "cdasim/orderbook.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cdasim {

const char* to_string(EventKind k) noexcept {
  switch (k) {
  case EventKind::Placed: return "PLACED";
  case EventKind::Executed: return "EXECUTED";
  case EventKind::Cancelled: return "CANCELLED";
  }
  return "?";
}

template <class Levels>
void OrderBook::match(Order& incoming, Levels& opposite, TimeStep now) {
  const auto crosses = [&](Ticks resting_price) {
    return incoming.side == Side::Buy ? resting_price <= incoming.limit : resting_price >= incoming.limit;
  };
  while (incoming.quantity > 0 && !opposite.empty() && crosses(opposite.begin()->first)) {
    auto level = opposite.begin();
    auto& queue = level->second;
    Order& resting = queue.front();
    const std::int64_t fill = std::min(incoming.quantity, resting.quantity);
    const auto trade_id = static_cast<std::int64_t>(trades_.size());
    const bool buy_incoming = incoming.side == Side::Buy;

    trades_.push_back(Trade{trade_id, now, level->first, fill, buy_incoming ? incoming.id : resting.id,
                            buy_incoming ? resting.id : incoming.id, buy_incoming ? incoming.agent : resting.agent,
                            buy_incoming ? resting.agent : incoming.agent});
    events_.push_back(BookEvent{EventKind::Executed, now, resting.id, resting.agent, resting.side, level->first, fill,
                                incoming.id, trade_id});
    events_.push_back(BookEvent{EventKind::Executed, now, incoming.id, incoming.agent, incoming.side, level->first,
                                fill, resting.id, trade_id});

    incoming.quantity -= fill;
    resting.quantity -= fill;
    if (resting.quantity == 0) {
      index_.erase(resting.id);
      queue.pop_front();
      if (queue.empty()) opposite.erase(level);
    }
  }
}

std::vector<BookEvent> OrderBook::place_limit(const Order& order, TimeStep now) {
  if (order.limit < 0) throw std::invalid_argument("limit price must be >= 0");
  if (order.quantity < 1) throw std::invalid_argument("order quantity must be >= 1");
  if (placed_at_index_.contains(order.id))
    throw std::invalid_argument("duplicate order id " + std::to_string(order.id));
  if (!events_.empty() && now < events_.back().time) throw OrderingError("order placed before the last book event");
  placed_at_index_.emplace(order.id, events_.size());

  const std::size_t first = events_.size();
  Order incoming = order;
  incoming.placed_at = now;
  events_.push_back(
      BookEvent{EventKind::Placed, now, incoming.id, incoming.agent, incoming.side, incoming.limit, incoming.quantity});

  if (incoming.side == Side::Buy)
    match(incoming, asks_, now);
  else
    match(incoming, bids_, now);

  if (incoming.quantity > 0) {
    index_.emplace(incoming.id, std::pair{incoming.side, incoming.limit});
    if (incoming.side == Side::Buy)
      bids_[incoming.limit].push_back(incoming);
    else
      asks_[incoming.limit].push_back(incoming);
  }
  return {events_.begin() + static_cast<std::ptrdiff_t>(first), events_.end()};
}

std::optional<BookEvent> OrderBook::cancel(OrderId id, TimeStep now) {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  if (!events_.empty() && now < events_.back().time) throw OrderingError("cancel before the last book event");
  const auto [side, price] = it->second;
  const auto remove = [&](auto& levels) {
    auto level = levels.find(price);
    auto& queue = level->second;
    auto pos = std::find_if(queue.begin(), queue.end(), [id](const Order& o) { return o.id == id; });
    Order removed = *pos;
    queue.erase(pos);
    if (queue.empty()) levels.erase(level);
    return removed;
  };
  const Order removed = side == Side::Buy ? remove(bids_) : remove(asks_);
  index_.erase(it);
  events_.push_back(BookEvent{EventKind::Cancelled, now, removed.id, removed.agent, removed.side, removed.limit,
                              removed.quantity});
  return events_.back();
}

std::optional<Ticks> OrderBook::best_bid() const {
  if (bids_.empty()) return std::nullopt;
  return bids_.begin()->first;
}

std::optional<Ticks> OrderBook::best_ask() const {
  if (asks_.empty()) return std::nullopt;
  return asks_.begin()->first;
}

std::optional<Order> OrderBook::resting_order(OrderId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  const auto [side, price] = it->second;
  const auto find_in = [&](const auto& levels) -> std::optional<Order> {
    const auto& queue = levels.at(price);
    auto pos = std::find_if(queue.begin(), queue.end(), [id](const Order& o) { return o.id == id; });
    return *pos;
  };
  return side == Side::Buy ? find_in(bids_) : find_in(asks_);
}

std::span<const BookEvent> OrderBook::event_history(TimeStep from, TimeStep to) const {
  auto lo = std::lower_bound(events_.begin(), events_.end(), from,
                             [](const BookEvent& e, TimeStep t) { return e.time < t; });
  auto hi = std::upper_bound(lo, events_.end(), to, [](TimeStep t, const BookEvent& e) { return t < e.time; });
  return {lo, hi};
}

std::size_t OrderBook::window_start(std::size_t trades) const {
  if (trades == 0 || trades_.size() < trades) return 0;
  std::size_t first = events_.size();
  for (auto it = trades_.end() - static_cast<std::ptrdiff_t>(trades); it != trades_.end(); ++it)
    first = std::min({first, placed_at_index_.at(it->buy_order), placed_at_index_.at(it->sell_order)});
  const TimeStep start_time = events_[first].time;
  while (first > 0 && events_[first - 1].time >= start_time) --first;
  return first;
}

std::vector<PriceLevel> OrderBook::snapshot() const {
  std::vector<PriceLevel> out;
  for (const auto& [price, queue] : bids_) out.push_back({Side::Buy, price, {queue.begin(), queue.end()}});
  for (const auto& [price, queue] : asks_) out.push_back({Side::Sell, price, {queue.begin(), queue.end()}});
  return out;
}

bool OrderBook::crossed() const {
  return !bids_.empty() && !asks_.empty() && bids_.begin()->first >= asks_.begin()->first;
}

OrderBook replay(std::span<const BookEvent> log) {
  OrderBook book;
  for (const auto& e : log) {
    if (e.kind == EventKind::Placed)
      book.place_limit(Order{e.order_id, e.agent_id, e.side, e.price, e.quantity, e.time}, e.time);
    else if (e.kind == EventKind::Cancelled)
      book.cancel(e.order_id, e.time);
  }
  return book;
}

} // namespace cdasim
