#pragma once
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cdasim/orderbook.hpp"
#include "cdasim/preferences.hpp"
#include "cdasim/rng.hpp"
#include "cdasim/types.hpp"

namespace cdasim {

struct ZiParams {
  double r_min{0.0};
  double r_max{0.1};
  double eta{1.0};
  double sigma_n_sq{0.1};
  int q_max{10};
  double sigma_pv_sq{0.25};

  void validate() const;
  bool operator==(const ZiParams&) const = default;
};

enum class SuccessMode { Binary, Fractional };
enum class GridMode { Observed, Spline };

struct HblParams {
  ZiParams zi{};
  int memory_length{5};
  TimeStep grace_period{200};
  SuccessMode success_mode{SuccessMode::Binary};
  GridMode grid_mode{GridMode::Observed};
  // Ticks added beyond the observed price extremes when building the candidate grid.
  int grid_extension{1};

  void validate() const;
  bool operator==(const HblParams&) const = default;
};

struct MarketView {
  std::optional<Ticks> best_bid;
  std::optional<Ticks> best_ask;
};

struct AgentAction {
  enum class Kind { Place, Take, Skip };

  Kind kind{Kind::Skip};
  Side side{Side::Buy};
  Ticks limit{0};
  // Diagnostics for decision traces.
  double valuation{0.0};
  double requested_surplus{0.0}; // ZI: R
  double expected_surplus{0.0};  // HBL: E(s|p*)
  double belief{0.0};            // HBL: Pr(p*)
  std::size_t grid_size{0};
  bool fallback{false};

  static AgentAction skip() { return {}; }
};

const char* to_string(AgentAction::Kind k) noexcept;

// Fair coin for the side; flips to the only legal side at a holdings limit.
std::optional<Side> choose_side(int q_held, const PrivateValues& pv, Rng& rng);

// ZI pricing once side, valuation v and requested surplus R are fixed: take the touch
// if it yields at least eta*R, else place at v-R (buy, rounded down) or v+R (sell,
// rounded up).
AgentAction zi_limit(Side side, double valuation, double requested_surplus, const MarketView& market, double eta,
                     const PriceScale& scale);

AgentAction zi_decide(int q_held, const PrivateValues& pv, double r_hat, const MarketView& market,
                      const ZiParams& params, const PriceScale& scale, Rng& rng);

// Outcome weights of one remembered order. Weights may sum to less than one while an
// order is still inside its grace period.
struct OrderOutcome {
  OrderId id{0};
  Side side{Side::Buy};
  Ticks price{0};
  TimeStep placed_at{0};
  double success{0.0};
  double failure{0.0};

  bool operator==(const OrderOutcome&) const = default;
};

struct HblMemory {
  std::vector<OrderOutcome> orders;
  std::size_t transactions{0}; // capped at the memory length
  TimeStep window_start{0};

  bool empty() const noexcept { return orders.empty(); }
};

// Builds the memory covering every order placed at or after the placement of the
// oldest order involved in the last L trades, classifying each order's outcome as
// seen at `now`. Throws std::invalid_argument on a malformed log.
HblMemory hbl_classify(std::span<const BookEvent> events, TimeStep now, const HblParams& params);

// Pr(p) for a buyer:  (A<=p + S<=p) / (A<=p + S<=p + U>=p)
// and mirrored for a seller: (B>=p + S'>=p) / (B>=p + S'>=p + U'<=p).
// Zero when the denominator is zero.
class BeliefFunction {
public:
  BeliefFunction(const HblMemory& memory, Side side);
  double operator()(Ticks p) const;

private:
  struct Weighted {
    Ticks price;
    double cumulative;
  };
  // Buyer: support counted at <= p, failures at >= p. Seller: the reverse.
  double support(Ticks p) const;
  double failures(Ticks p) const;

  Side side_;
  std::vector<Weighted> support_;
  std::vector<Weighted> failures_;
};

double hbl_belief(const HblMemory& memory, Ticks p, Side side);

struct CandidateTable {
  std::vector<Ticks> prices;
  std::vector<double> belief;
};

// OBSERVED: distinct remembered prices plus `extension` ticks beyond each extreme.
// SPLINE: every tick from min-extension to max+extension.
std::vector<Ticks> hbl_candidate_grid(const HblMemory& memory, GridMode mode, int extension = 1);

// Candidate prices with Pr(p): the belief function directly for OBSERVED, a natural
// cubic spline through the observed (p, Pr(p)) points clamped to [0,1] for SPLINE.
CandidateTable hbl_candidate_table(const HblMemory& memory, Side side, GridMode mode, int extension = 1);

struct HblChoice {
  Ticks price{0};
  double expected_surplus{0.0};
  double belief{0.0};
};

// argmax_p (v - p) Pr(p) for a buyer, (p - v) Pr(p) for a seller, over a nonempty table.
// Ties go to the lower price for buyers and the higher price for sellers.
HblChoice hbl_best_price(const CandidateTable& table, Side side, double valuation, const PriceScale& scale);

// Expected-surplus maximizing limit order, falling back to ZI until the memory holds
// L trades.
AgentAction hbl_decide(int q_held, const PrivateValues& pv, double r_hat, const HblMemory& memory,
                       const MarketView& market, const HblParams& params, const PriceScale& scale, Rng& rng);

} // namespace cdasim
