#pragma once
#include <span>
#include <vector>

#include "cdasim/rng.hpp"
#include "cdasim/types.hpp"

namespace cdasim {

// Incremental private values theta^q for q in {-q_max+1, ..., q_max}, non-increasing in q.
class PrivateValues {
public:
  PrivateValues() = default;
  // Takes theta in index order (q = -q_max+1 first). Throws ConfigError if the
  // length is not 2*q_max or the values are not sorted descending.
  PrivateValues(int q_max, std::vector<double> theta);

  int q_max() const noexcept { return q_max_; }
  int min_index() const noexcept { return -q_max_ + 1; }
  int max_index() const noexcept { return q_max_; }
  bool has_index(int q) const noexcept { return q >= min_index() && q <= max_index(); }

  // theta^q; throws HoldingsLimitError outside the index range.
  double theta(int q) const;
  std::span<const double> values() const noexcept { return theta_; }

  bool can_buy(int q_held) const noexcept { return has_index(q_held + 1); }
  bool can_sell(int q_held) const noexcept { return has_index(q_held); }

  // Private value realized by ending the run holding q units: sum of theta^1..theta^q
  // for q > 0, minus the sum of theta^(q+1)..theta^0 for q < 0.
  double realized(int q_held) const;

  bool operator==(const PrivateValues&) const = default;

private:
  std::size_t offset(int q) const noexcept { return static_cast<std::size_t>(q + q_max_ - 1); }

  int q_max_{0};
  std::vector<double> theta_;
};

PrivateValues draw_private_values(int q_max, double sigma_pv_sq, Rng& rng);

// Valuation of the next unit traded: BUY uses theta^(q+1), SELL uses theta^q.
double total_valuation(const PrivateValues& pv, int q_held, Side side, double r_hat);

} // namespace cdasim
