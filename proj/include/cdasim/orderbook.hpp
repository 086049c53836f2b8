#pragma once
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "cdasim/types.hpp"

namespace cdasim {

struct Order {
  OrderId id{0};
  AgentId agent{0};
  Side side{Side::Buy};
  Ticks limit{0};
  std::int64_t quantity{1};
  TimeStep placed_at{0};

  bool operator==(const Order&) const = default;
};

enum class EventKind : std::uint8_t { Placed, Executed, Cancelled };

const char* to_string(EventKind k) noexcept;

// One entry of the append-only book log. A trade emits two EXECUTED events, resting
// order first, each naming the other order as counterparty and sharing a trade_id.
// PLACED carries the limit price and full quantity, CANCELLED the limit and the
// quantity withdrawn, EXECUTED the trade price and fill quantity.
struct BookEvent {
  EventKind kind{EventKind::Placed};
  TimeStep time{0};
  OrderId order_id{0};
  AgentId agent_id{0};
  Side side{Side::Buy};
  Ticks price{0};
  std::int64_t quantity{0};
  OrderId counterparty{-1};
  std::int64_t trade_id{-1};

  bool operator==(const BookEvent&) const = default;
};

struct Trade {
  std::int64_t id{0};
  TimeStep time{0};
  Ticks price{0};
  std::int64_t quantity{0};
  OrderId buy_order{0};
  OrderId sell_order{0};
  AgentId buyer{0};
  AgentId seller{0};

  bool operator==(const Trade&) const = default;
};

struct PriceLevel {
  Side side;
  Ticks price;
  std::vector<Order> queue; // FIFO order

  bool operator==(const PriceLevel&) const = default;
};

// Price-time priority limit order book for a single asset. Trades execute at the
// resting order's limit.
class OrderBook {
public:
  // Matches while crossing, rests any remainder. Returns the events appended:
  // PLACED followed by zero or more EXECUTED.
  // Throws std::invalid_argument on a reused id, negative limit or zero quantity,
  // OrderingError if now precedes the last logged event.
  std::vector<BookEvent> place_limit(const Order& order, TimeStep now);

  // Removes a resting order. Returns nullopt when the id is unknown or already filled.
  std::optional<BookEvent> cancel(OrderId id, TimeStep now);

  std::optional<Ticks> best_bid() const;
  std::optional<Ticks> best_ask() const;

  bool is_resting(OrderId id) const { return index_.contains(id); }
  std::optional<Order> resting_order(OrderId id) const;

  std::span<const BookEvent> events() const noexcept { return events_; }
  // Events with from <= time <= to.
  std::span<const BookEvent> event_history(TimeStep from, TimeStep to) const;
  std::span<const Trade> trades() const noexcept { return trades_; }

  // Index of the first event at or after the placement time of the oldest order
  // involved in the last `trades` trades (0 when fewer trades exist).
  std::size_t window_start(std::size_t trades) const;

  // Resting levels, bids best-first then asks best-first.
  std::vector<PriceLevel> snapshot() const;
  bool crossed() const;

private:
  template <class Levels>
  void match(Order& incoming, Levels& opposite, TimeStep now);

  std::map<Ticks, std::deque<Order>, std::greater<>> bids_;
  std::map<Ticks, std::deque<Order>> asks_;
  std::unordered_map<OrderId, std::pair<Side, Ticks>> index_;
  std::unordered_map<OrderId, std::size_t> placed_at_index_;
  std::vector<BookEvent> events_;
  std::vector<Trade> trades_;
};

// Rebuilds a book by re-submitting every PLACED and CANCELLED event of a log.
OrderBook replay(std::span<const BookEvent> log);

} // namespace cdasim
