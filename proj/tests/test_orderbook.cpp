#include <doctest.h>

#include "cdasim/orderbook.hpp"
#include "oracles.hpp"

using namespace cdasim;

namespace {

Order bid(OrderId id, Ticks p, AgentId a = 0) { return Order{id, a, Side::Buy, p, 1, 0}; }
Order ask(OrderId id, Ticks p, AgentId a = 1) { return Order{id, a, Side::Sell, p, 1, 0}; }

} // namespace

TEST_CASE("empty book and resting orders") {
  OrderBook book;
  CHECK_FALSE(book.best_bid());
  CHECK_FALSE(book.best_ask());
  book.place_limit(bid(1, 1000), 0);
  CHECK(book.best_bid() == 1000);
  CHECK_FALSE(book.best_ask());
}

TEST_CASE("best quotes") {
  OrderBook book;
  book.place_limit(bid(1, 995), 0);
  book.place_limit(bid(2, 998), 0);
  book.place_limit(ask(3, 1001), 0);
  book.place_limit(ask(4, 1004), 0);
  CHECK(book.best_bid() == 998);
  CHECK(book.best_ask() == 1001);
  CHECK_FALSE(book.crossed());
}

TEST_CASE("trade at the resting price") {
  OrderBook book;
  book.place_limit(ask(1, 1000), 0);
  const auto events = book.place_limit(bid(2, 1002), 1);
  REQUIRE(events.size() == 3);
  CHECK(events[0].kind == EventKind::Placed);
  CHECK(events[1].kind == EventKind::Executed);
  CHECK(events[1].order_id == 1);
  CHECK(events[2].order_id == 2);
  CHECK(events[1].trade_id == events[2].trade_id);
  CHECK(events[1].counterparty == 2);
  CHECK(events[2].price == 1000);
  REQUIRE(book.trades().size() == 1);
  CHECK(book.trades()[0].price == 1000);
  CHECK(book.trades()[0].buyer == 0);
  CHECK(book.trades()[0].seller == 1);
  CHECK(book.snapshot().empty());
}

TEST_CASE("equal-price asks fill in arrival order") {
  OrderBook book;
  book.place_limit(ask(1, 1000), 0);
  book.place_limit(ask(2, 1000), 1);
  book.place_limit(ask(3, 1003), 2);
  book.place_limit(bid(4, 1000), 3);
  book.place_limit(bid(5, 1000), 4);
  book.place_limit(bid(6, 1003), 5);
  REQUIRE(book.trades().size() == 3);
  CHECK(book.trades()[0].sell_order == 1);
  CHECK(book.trades()[0].buy_order == 4);
  CHECK(book.trades()[1].sell_order == 2);
  CHECK(book.trades()[1].buy_order == 5);
  CHECK(book.trades()[2].sell_order == 3);
  CHECK(book.trades()[2].buy_order == 6);
}

TEST_CASE("partial fills walk the book") {
  OrderBook book;
  book.place_limit(Order{1, 1, Side::Sell, 1000, 2, 0}, 0);
  book.place_limit(Order{2, 1, Side::Sell, 1001, 2, 0}, 0);
  book.place_limit(Order{3, 0, Side::Buy, 1001, 3, 0}, 1);
  REQUIRE(book.trades().size() == 2);
  CHECK(book.trades()[0].quantity == 2);
  CHECK(book.trades()[1].quantity == 1);
  CHECK(book.resting_order(2)->quantity == 1);
  CHECK_FALSE(book.is_resting(3));
}

TEST_CASE("cancel") {
  OrderBook book;
  book.place_limit(bid(1, 1000), 0);
  const auto c = book.cancel(1, 1);
  REQUIRE(c);
  CHECK(c->kind == EventKind::Cancelled);
  CHECK(book.snapshot().empty());
  REQUIRE(book.events().size() == 2);
  CHECK(book.events()[0].kind == EventKind::Placed);

  CHECK_FALSE(book.cancel(99, 1));
  book.place_limit(ask(2, 1000), 2);
  book.place_limit(bid(3, 1000), 2);
  CHECK_FALSE(book.cancel(2, 3));
  CHECK(book.events().size() == 6);
}

TEST_CASE("input validation") {
  OrderBook book;
  book.place_limit(bid(1, 1000), 5);
  CHECK_THROWS_AS(book.place_limit(bid(1, 1000), 5), std::invalid_argument);
  CHECK_THROWS_AS(book.place_limit(bid(2, -1), 5), std::invalid_argument);
  CHECK_THROWS_AS(book.place_limit(Order{3, 0, Side::Buy, 1, 0, 0}, 5), std::invalid_argument);
  CHECK_THROWS_AS(book.place_limit(bid(4, 1000), 4), OrderingError);
}

TEST_CASE("event log") {
  OrderBook book;
  for (OrderId i = 1; i <= 20; ++i) book.place_limit(i % 2 ? bid(i, 990 + i) : ask(i, 1010 - i), i / 3);
  std::size_t placed = 0;
  for (const auto& e : book.events()) placed += e.kind == EventKind::Placed;
  CHECK(placed == 20);
  for (std::size_t i = 1; i < book.events().size(); ++i) CHECK(book.events()[i - 1].time <= book.events()[i].time);
  CHECK(book.event_history(2, 3).size() > 0);
  for (const auto& e : book.event_history(2, 3)) CHECK((e.time >= 2 && e.time <= 3));
}

TEST_CASE("window start covers the placements behind the last trades") {
  const auto book = oracle::play(oracle::worked_example_script());
  CHECK(book.trades().size() == 4);
  CHECK(book.window_start(4) == 0);
  CHECK(book.window_start(5) == 0);
  // The last trade fills the ask placed at step 3, so two trades reach back that far.
  CHECK(book.events()[book.window_start(2)].time == 3);
  // The last trade alone: ask from step 3 as well.
  CHECK(book.events()[book.window_start(1)].time == 3);
}

TEST_CASE("random streams match the reference book") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto bad = oracle::check_random_stream(seed, 200);
    INFO("seed " << seed);
    CHECK(bad.empty());
  }
}
