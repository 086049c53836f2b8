#pragma once
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace cdasim {

// Prices are stored as integer tick counts. Currency = ticks * tick_size.
using Ticks = std::int64_t;
using TimeStep = std::int64_t;
using OrderId = std::int64_t;
using AgentId = std::int32_t;

enum class Side : std::uint8_t { Buy, Sell };

inline constexpr Side opposite(Side s) noexcept { return s == Side::Buy ? Side::Sell : Side::Buy; }
inline constexpr const char* to_string(Side s) noexcept { return s == Side::Buy ? "BID" : "ASK"; }

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class OrderingError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

class HoldingsLimitError : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

class InvariantError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& what, const std::string& source = "")
    : std::runtime_error((source.empty() ? "" : source + ": ") + "line " + std::to_string(line) + ": " + what),
      line_(line), detail_(what) {}
  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

private:
  std::size_t line_;
  std::string detail_;
};

// Conversion between currency and the tick grid.
struct PriceScale {
  double tick_size{0.1};

  // Guards floor/ceil against representation error such as 99.55/0.01 = 9954.999...
  static constexpr double kSnap = 1e-9;

  double to_real(Ticks t) const noexcept { return static_cast<double>(t) * tick_size; }

  // Round half away from zero.
  Ticks nearest(double x) const noexcept { return static_cast<Ticks>(std::llround(x / tick_size)); }
  Ticks floor(double x) const noexcept { return static_cast<Ticks>(std::floor(x / tick_size + kSnap)); }
  Ticks ceil(double x) const noexcept { return static_cast<Ticks>(std::ceil(x / tick_size - kSnap)); }

  // Number of decimals needed to print a price on this grid.
  int decimals() const noexcept {
    int d = 0;
    double scaled = tick_size;
    while (d < 9 && std::fabs(scaled - std::round(scaled)) > 1e-9) {
      scaled *= 10.0;
      ++d;
    }
    return d;
  }

  std::string format(Ticks t) const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals(), to_real(t));
    return buf;
  }

  bool operator==(const PriceScale&) const = default;
};

} // namespace cdasim
