#include "cdasim/spline.hpp"

#include <algorithm>
#include <stdexcept>

namespace cdasim {

NaturalCubicSpline::NaturalCubicSpline(std::span<const double> x, std::span<const double> y)
  : x_(x.begin(), x.end()), y_(y.begin(), y.end()), m_(x.size(), 0.0) {
  if (x.empty() || x.size() != y.size()) throw std::invalid_argument("spline needs matching nonempty knots");
  for (std::size_t i = 1; i < x_.size(); ++i)
    if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("spline knots must be strictly increasing");
  const std::size_t n = x_.size();
  if (n < 3) return;
  // Thomas algorithm on the interior second derivatives.
  std::vector<double> c(n, 0.0), d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    const double a = h0;
    const double b = 2.0 * (h0 + h1);
    const double rhs = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    const double denom = b - a * c[i - 1];
    c[i] = h1 / denom;
    d[i] = (rhs - a * d[i - 1]) / denom;
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = d[i] - c[i] * m_[i + 1];
    if (i == 1) break;
  }
}

double NaturalCubicSpline::operator()(double at) const {
  const std::size_t n = x_.size();
  if (n == 1) return y_[0];
  const auto slope = [&](std::size_t i) { // derivative at knot i, from its segment
    if (i == 0) {
      const double h = x_[1] - x_[0];
      return (y_[1] - y_[0]) / h - h * (2.0 * m_[0] + m_[1]) / 6.0;
    }
    const double h = x_[n - 1] - x_[n - 2];
    return (y_[n - 1] - y_[n - 2]) / h + h * (m_[n - 2] + 2.0 * m_[n - 1]) / 6.0;
  };
  if (at <= x_.front()) return y_.front() + slope(0) * (at - x_.front());
  if (at >= x_.back()) return y_.back() + slope(n - 1) * (at - x_.back());
  const auto hi = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), at) - x_.begin());
  const std::size_t lo = hi - 1;
  const double h = x_[hi] - x_[lo];
  const double a = (x_[hi] - at) / h;
  const double b = (at - x_[lo]) / h;
  return a * y_[lo] + b * y_[hi] + ((a * a * a - a) * m_[lo] + (b * b * b - b) * m_[hi]) * h * h / 6.0;
}

} // namespace cdasim
