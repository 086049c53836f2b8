#pragma once
#include <span>
#include <vector>

namespace cdasim {

// Natural cubic spline through strictly increasing knots. Outside the knot range it
// continues linearly with the end slope.
class NaturalCubicSpline {
public:
  NaturalCubicSpline(std::span<const double> x, std::span<const double> y);
  double operator()(double at) const;

private:
  std::vector<double> x_, y_, m_; // m_ = second derivatives at knots
};

} // namespace cdasim
