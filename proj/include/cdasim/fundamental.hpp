#pragma once
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cdasim/rng.hpp"
#include "cdasim/types.hpp"

namespace cdasim {

// Discrete mean-reverting series:
//   r_t = max{0, kappa*r_bar + (1-kappa)*r_{t-1} + u_t},  u_t ~ N(0, sigma_s_sq),  r_0 = r_bar
struct DmrParams {
  Ticks r_bar{1000};
  double kappa{0.05};
  double sigma_s_sq{0.01};
  std::uint64_t seed{0};
  PriceScale scale{};

  void validate() const;
};

// One step of the recurrence; noise_draw is u_t in currency units.
Ticks dmr_step(Ticks prev, const DmrParams& params, double noise_draw);

class DmrSource {
public:
  // start overrides r_0 (test hook for contraction checks).
  DmrSource(DmrParams params, TimeStep horizon, std::optional<Ticks> start = std::nullopt);

  // Random access; values are memoized so any query order is valid.
  Ticks value_at(TimeStep t);
  TimeStep horizon() const noexcept { return horizon_; }
  const DmrParams& params() const noexcept { return params_; }

private:
  DmrParams params_;
  TimeStep horizon_;
  Rng rng_;
  std::vector<Ticks> prefix_;
};

// Ornstein-Uhlenbeck process sampled exactly across arbitrary gaps.
struct OuParams {
  Ticks mu{1000};
  double gamma{0.05};
  double sigma_sq{0.01};
  Ticks q0{1000};
  std::uint64_t seed{0};
  PriceScale scale{};

  void validate() const;
};

// Real-valued exact transition over `elapsed` time units given a standard normal draw.
double ou_transition(double q_prev, double elapsed, const OuParams& params, double std_normal_draw);
// ou_transition on the tick grid: rounded to nearest tick and floored at zero.
Ticks ou_sample(Ticks q_prev, double elapsed, const OuParams& params, double std_normal_draw);

// Conditional mean and variance of the OU state after `elapsed`.
std::pair<double, double> ou_moments(double q_prev, double elapsed, const OuParams& params);

class OuSource {
public:
  OuSource(OuParams params, TimeStep horizon);

  // Queries must arrive in nondecreasing t.
  Ticks value_at(TimeStep t);

  // Sparse hop of the real-valued state to an arbitrary later time.
  void advance_to(double time);
  void shift_state(double delta) noexcept { value_ += delta; }
  void floor_state() noexcept;
  double state() const noexcept { return value_; }
  double time() const noexcept { return time_; }
  TimeStep horizon() const noexcept { return horizon_; }
  const OuParams& params() const noexcept { return params_; }

private:
  OuParams params_;
  TimeStep horizon_;
  Rng rng_;
  double time_{0.0};
  double value_;
};

// OU fundamental with Poisson-arriving jumps from a symmetric two-lobe Gaussian mixture.
struct MegashockParams {
  OuParams ou{};
  double arrival_rate{1e-4};
  double shock_mean{10.0};
  double shock_var{25.0};
  std::uint64_t seed{0};

  void validate() const;
  // Non-fatal configuration advice.
  std::vector<std::string> warnings() const;
};

// One draw from the mixture: lobe +/- shock_mean with probability 1/2 each.
double megashock_draw(const MegashockParams& params, Rng& sizes);

struct Megashock {
  double time;
  double size;
};

class MegashockSource {
public:
  MegashockSource(MegashockParams params, TimeStep horizon);

  // Applies every arrival in (last query, t]. Queries must arrive in nondecreasing t.
  Ticks value_at(TimeStep t);
  const std::vector<Megashock>& shocks() const noexcept { return shocks_; }
  const MegashockParams& params() const noexcept { return params_; }

private:
  MegashockParams params_;
  OuSource ou_;
  Rng arrivals_;
  Rng sizes_;
  double next_arrival_;
  TimeStep last_query_{0};
  std::vector<Megashock> shocks_;
};

// Externally supplied series, step-interpolated.
struct FundamentalTable {
  std::vector<std::pair<TimeStep, Ticks>> rows;
};

// Two delimited columns `timestamp,value`; optional header; '#' comments and blank lines skipped.
FundamentalTable parse_fundamental_table(std::istream& in, const PriceScale& scale);
FundamentalTable load_fundamental_table(const std::string& path, const PriceScale& scale);
void write_fundamental_table(std::ostream& out, const std::vector<std::pair<TimeStep, Ticks>>& rows,
                             const PriceScale& scale);

Ticks file_value_at(TimeStep t, const FundamentalTable& table);

class FileSource {
public:
  explicit FileSource(FundamentalTable table);
  Ticks value_at(TimeStep t) const { return file_value_at(t, table_); }
  const FundamentalTable& table() const noexcept { return table_; }

private:
  FundamentalTable table_;
};

enum class FundamentalKind { Dmr, Ou, Megashock, File };

const char* to_string(FundamentalKind k) noexcept;

class FundamentalSource {
public:
  using Impl = std::variant<DmrSource, OuSource, MegashockSource, FileSource>;

  explicit FundamentalSource(Impl impl) : impl_(std::move(impl)) {}

  Ticks value_at(TimeStep t);
  FundamentalKind kind() const noexcept { return static_cast<FundamentalKind>(impl_.index()); }
  const Impl& impl() const noexcept { return impl_; }

private:
  Impl impl_;
};

} // namespace cdasim
