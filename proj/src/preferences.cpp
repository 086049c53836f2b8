#include "cdasim/preferences.hpp"

#include <algorithm>
#include <functional>
#include <string>

namespace cdasim {

PrivateValues::PrivateValues(int q_max, std::vector<double> theta) : q_max_(q_max), theta_(std::move(theta)) {
  if (q_max < 1) throw ConfigError("q_max >= 1 violated");
  if (theta_.size() != static_cast<std::size_t>(2 * q_max))
    throw ConfigError("private value vector must have 2*q_max entries");
  if (!std::is_sorted(theta_.begin(), theta_.end(), std::greater<>{}))
    throw ConfigError("private values must be sorted in descending order");
}

double PrivateValues::theta(int q) const {
  if (!has_index(q))
    throw HoldingsLimitError("private value index " + std::to_string(q) + " outside [" +
                             std::to_string(min_index()) + ", " + std::to_string(max_index()) + "]");
  return theta_[offset(q)];
}

double PrivateValues::realized(int q_held) const {
  double sum = 0.0;
  if (q_held > 0)
    for (int k = 1; k <= q_held; ++k) sum += theta(k);
  else
    for (int k = q_held + 1; k <= 0; ++k) sum -= theta(k);
  return sum;
}

PrivateValues draw_private_values(int q_max, double sigma_pv_sq, Rng& rng) {
  if (q_max < 1) throw ConfigError("q_max >= 1 violated");
  if (!(sigma_pv_sq >= 0.0)) throw ConfigError("sigma_pv_sq >= 0 violated");
  std::vector<double> theta(static_cast<std::size_t>(2 * q_max));
  for (auto& v : theta) v = rng.normal(0.0, sigma_pv_sq);
  std::sort(theta.begin(), theta.end(), std::greater<>{});
  return PrivateValues(q_max, std::move(theta));
}

double total_valuation(const PrivateValues& pv, int q_held, Side side, double r_hat) {
  return r_hat + pv.theta(side == Side::Buy ? q_held + 1 : q_held);
}

} // namespace cdasim
