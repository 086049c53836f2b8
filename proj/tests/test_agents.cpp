#include <doctest.h>

#include <cmath>

#include "cdasim/agents.hpp"
#include "oracles.hpp"

using namespace cdasim;

namespace {

const PriceScale cents{0.01};
const PriceScale dimes{0.1};

PrivateValues example_pv() { return PrivateValues(3, {0.5, 0.3, 0.2, 0.1, -0.2, -0.4}); }

HblParams example_params() {
  HblParams p;
  p.memory_length = 4;
  p.grace_period = 1;
  return p;
}

HblMemory example_memory() {
  const auto book = oracle::play(oracle::worked_example_script());
  return hbl_classify(book.events(), 1000, example_params());
}

std::uint64_t seed_with_first_coin(bool heads) {
  for (std::uint64_t s = 0;; ++s)
    if (Rng(s).coin() == heads) return s;
}

} // namespace

TEST_CASE("zi limit follows the worked example") {
  const double v = total_valuation(example_pv(), 1, Side::Buy, 100.0);
  const auto plain = zi_limit(Side::Buy, v, 0.25, {}, 0.5, cents);
  CHECK(plain.kind == AgentAction::Kind::Place);
  CHECK(plain.limit == 9955);

  const auto take = zi_limit(Side::Buy, v, 0.25, {std::nullopt, 9967}, 0.5, cents);
  CHECK(take.kind == AgentAction::Kind::Take);
  CHECK(take.limit == 9967);

  const auto place = zi_limit(Side::Buy, v, 0.25, {std::nullopt, 9970}, 0.5, cents);
  CHECK(place.kind == AgentAction::Kind::Place);
  CHECK(place.limit == 9955);
}

TEST_CASE("zi sells round up and take against the bid") {
  const auto a = zi_limit(Side::Sell, 100.2, 0.25, {}, 1.0, cents);
  CHECK(a.limit == 10045);
  const auto coarse = zi_limit(Side::Sell, 100.2, 0.25, {}, 1.0, dimes);
  CHECK(coarse.limit == 1005);
  const auto take = zi_limit(Side::Sell, 100.2, 0.25, {10050, std::nullopt}, 1.0, cents);
  CHECK(take.kind == AgentAction::Kind::Take);
}

TEST_CASE("eta zero takes any non-negative surplus") {
  const auto at = zi_limit(Side::Buy, 100.0, 0.4, {std::nullopt, 10000}, 0.0, cents);
  CHECK(at.kind == AgentAction::Kind::Take);
  const auto above = zi_limit(Side::Buy, 100.0, 0.4, {std::nullopt, 10001}, 0.0, cents);
  CHECK(above.kind == AgentAction::Kind::Place);
}

TEST_CASE("zi decide") {
  ZiParams p;
  p.r_min = p.r_max = 0.3;
  p.q_max = 3;
  const auto pv = example_pv();
  Rng rng(seed_with_first_coin(true));
  const auto a = zi_decide(0, pv, 100.0, {}, p, cents, rng);
  CHECK(a.side == Side::Buy);
  CHECK(a.requested_surplus == 0.3);
  CHECK(a.limit == 9980);

  // At the long limit only selling is possible, whatever the coin says.
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng r(s);
    CHECK(zi_decide(3, pv, 100.0, {}, p, cents, r).side == Side::Sell);
  }
}

TEST_CASE("choose side skips when nothing is legal") {
  const PrivateValues tiny(1, {0.1, -0.1});
  Rng rng(1);
  CHECK(choose_side(1, tiny, rng) == Side::Sell);
  CHECK(choose_side(-1, tiny, rng) == Side::Buy);
}

TEST_CASE("classification") {
  HblParams binary;
  binary.memory_length = 1;
  binary.grace_period = 10;
  HblParams fractional = binary;
  fractional.success_mode = SuccessMode::Fractional;

  OrderBook book;
  book.place_limit(Order{1, 0, Side::Sell, 1000, 1, 0}, 0);
  book.place_limit(Order{2, 1, Side::Buy, 1000, 1, 0}, 0); // instant fill
  book.place_limit(Order{3, 0, Side::Sell, 1010, 1, 0}, 0);
  book.place_limit(Order{4, 1, Side::Buy, 990, 1, 0}, 0);
  book.place_limit(Order{5, 1, Side::Buy, 980, 1, 0}, 0);
  book.place_limit(Order{6, 0, Side::Sell, 990, 1, 0}, 5); // fills order 4 after 5 steps
  book.cancel(5, 5);

  const auto at = [](const HblMemory& m, OrderId id) {
    for (const auto& o : m.orders)
      if (o.id == id) return o;
    FAIL("missing order");
    return OrderOutcome{};
  };

  const auto early = hbl_classify(book.events(), 8, binary);
  CHECK(early.transactions == 1);
  CHECK(at(early, 2).success == 1.0);
  CHECK(at(early, 3).success == 0.0);
  CHECK(at(early, 3).failure == 0.0);
  CHECK(at(early, 5).failure == 1.0);

  const auto late = hbl_classify(book.events(), 20, binary);
  CHECK(at(late, 3).failure == 1.0);

  const auto frac = hbl_classify(book.events(), 20, fractional);
  CHECK(at(frac, 2).success == 1.0);
  CHECK(at(frac, 4).success == doctest::Approx(0.5));
  CHECK(at(frac, 4).failure == doctest::Approx(0.5));
  CHECK(at(frac, 3).failure == 1.0);
  CHECK(at(frac, 5).failure == doctest::Approx(0.5));

  CHECK_THROWS_AS(hbl_classify(book.events(), 3, binary), std::invalid_argument);
}

TEST_CASE("belief reproduces the worked example") {
  const auto m = example_memory();
  CHECK(m.transactions == 4);
  CHECK(m.orders.size() == 15);
  const std::pair<Ticks, double> expect[] = {
    {1005, 1.0}, {1004, 1.0}, {1003, 1.0}, {1002, 6.0 / 7}, {1001, 4.0 / 6},
    {1000, 0.5}, {999, 0.25}, {998, 0.0}, {997, 0.0},       {996, 0.0},
  };
  for (auto [p, pr] : expect) {
    INFO("price " << p);
    CHECK(hbl_belief(m, p, Side::Buy) == doctest::Approx(pr).epsilon(1e-15));
  }
  for (Ticks p = 996; p < 1005; ++p) CHECK(hbl_belief(m, p, Side::Buy) <= hbl_belief(m, p + 1, Side::Buy));
}

TEST_CASE("best price for the worked example") {
  const auto m = example_memory();
  const auto table = hbl_candidate_table(m, Side::Buy, GridMode::Observed);
  CHECK(table.prices.front() == 995);
  CHECK(table.prices.back() == 1005);
  const auto best = hbl_best_price(table, Side::Buy, 100.2, dimes);
  CHECK(best.price == 1000);
  CHECK(best.expected_surplus == doctest::Approx(0.1).epsilon(1e-12));

  const auto e = [&](Ticks p) { return (100.2 - dimes.to_real(p)) * hbl_belief(m, p, Side::Buy); };
  CHECK(e(999) == doctest::Approx(0.075));
  CHECK(e(1001) == doctest::Approx(0.1 * 4.0 / 6));

  HblParams p = example_params();
  p.zi.q_max = 3;
  Rng rng(seed_with_first_coin(true));
  const auto action = hbl_decide(-1, example_pv(), 100.0, m, {}, p, dimes, rng);
  CHECK_FALSE(action.fallback);
  CHECK(action.side == Side::Buy);
  CHECK(action.limit == 1000);
  CHECK(action.expected_surplus == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("staged formulas on the ten-ten-ten memory") {
  const auto bids = oracle::ten_ten_ten();
  CHECK_FALSE(oracle::stage_exact(bids, 8).has_value());
  CHECK(*oracle::stage_at_or_below(bids, 8) == 0.5);
  CHECK(*oracle::stage_split(bids, 8) == 1.0);

  HblMemory m;
  OrderId id = 0;
  for (const auto& b : bids) m.orders.push_back({++id, Side::Buy, static_cast<Ticks>(b.price), 0, b.success ? 1.0 : 0.0, b.success ? 0.0 : 1.0});
  CHECK(hbl_belief(m, 8, Side::Buy) == 1.0);
  CHECK(hbl_belief(m, 5, Side::Buy) == 0.0);
}

TEST_CASE("seller belief mirrors the buyer") {
  HblMemory m;
  m.orders = {{1, Side::Sell, 105, 0, 1.0, 0.0},
              {2, Side::Sell, 110, 0, 0.0, 1.0},
              {3, Side::Sell, 100, 0, 0.0, 1.0},
              {4, Side::Buy, 108, 0, 0.0, 1.0}};
  // support: bids at or above p plus successful asks at or above p; failures: asks at or below p
  CHECK(hbl_belief(m, 100, Side::Sell) == doctest::Approx(2.0 / 3));
  CHECK(hbl_belief(m, 105, Side::Sell) == doctest::Approx(2.0 / 3));
  CHECK(hbl_belief(m, 106, Side::Sell) == doctest::Approx(0.5));
  CHECK(hbl_belief(m, 109, Side::Sell) == doctest::Approx(0.0));
  CHECK(hbl_belief(m, 95, Side::Sell) == 1.0);
  for (Ticks p = 95; p < 115; ++p) CHECK(hbl_belief(m, p, Side::Sell) >= hbl_belief(m, p + 1, Side::Sell));
}

TEST_CASE("candidate grids") {
  HblMemory single;
  single.orders = {{1, Side::Buy, 500, 0, 1.0, 0.0}};
  CHECK(hbl_candidate_grid(single, GridMode::Observed) == std::vector<Ticks>{499, 500, 501});
  CHECK(hbl_candidate_grid(HblMemory{}, GridMode::Observed).empty());

  const auto m = example_memory();
  const auto spline = hbl_candidate_table(m, Side::Buy, GridMode::Spline, 3);
  CHECK(spline.prices.size() == 1004 + 3 - (996 - 3) + 1);
  for (double b : spline.belief) CHECK((b >= 0.0 && b <= 1.0));
}

TEST_CASE("ties go to the lower bid and the higher ask") {
  const PriceScale unit{1.0};
  // (100 - 99) * 1 = (101 - 99) * 0.5
  const CandidateTable ask{{100, 101}, {1.0, 0.5}};
  CHECK(hbl_best_price(ask, Side::Sell, 99.0, unit).price == 101);
  // (104 - 100) * 0.5 = (104 - 102) * 1
  const CandidateTable bid{{100, 102}, {0.5, 1.0}};
  CHECK(hbl_best_price(bid, Side::Buy, 104.0, unit).price == 100);
}

TEST_CASE("fallback is zi with the same stream") {
  HblParams p;
  p.zi.q_max = 3;
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng a(s), b(s);
    auto h = hbl_decide(0, example_pv(), 100.0, HblMemory{}, {std::nullopt, 10005}, p, cents, a);
    auto z = zi_decide(0, example_pv(), 100.0, {std::nullopt, 10005}, p.zi, cents, b);
    CHECK(h.fallback);
    CHECK(h.limit == z.limit);
    CHECK(h.kind == z.kind);
    CHECK(h.side == z.side);
  }
}

TEST_CASE("belief matches a full rescan") {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    HblMemory m;
    const int n = 1 + static_cast<int>(rng.uniform() * 30);
    for (int i = 0; i < n; ++i) {
      const double s = std::floor(rng.uniform() * 9) / 8;
      const double f = std::floor(rng.uniform() * (9 - s * 8)) / 8;
      m.orders.push_back({i, rng.coin() ? Side::Buy : Side::Sell, 90 + static_cast<Ticks>(rng.uniform() * 20), 0, s, f});
    }
    for (auto side : {Side::Buy, Side::Sell})
      for (Ticks p = 88; p <= 112; ++p) REQUIRE(hbl_belief(m, p, side) == oracle::belief_rescan(m, p, side));
  }
}
