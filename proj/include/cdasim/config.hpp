#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "cdasim/agents.hpp"
#include "cdasim/estimator.hpp"
#include "cdasim/fundamental.hpp"
#include "cdasim/types.hpp"

namespace cdasim {

// Fundamental process settings in currency units. Only the fields relevant to `kind`
// are read; the rest keep their defaults.
struct FundamentalConfig {
  FundamentalKind kind{FundamentalKind::Dmr};
  // dmr (and estimator knobs for the file variant)
  double r_bar{100.0};
  double kappa{0.001};
  double sigma_s_sq{0.01};
  // ou / megashock
  double mu{100.0};
  double gamma{0.001};
  double sigma_sq{0.01};
  double q0{100.0};
  // megashock
  double shock_rate{1e-4};
  double shock_mean{1.0};
  double shock_var{0.25};
  // file
  std::string path;

  bool operator==(const FundamentalConfig&) const = default;
};

enum class Strategy { Zi, Hbl };

const char* to_string(Strategy s) noexcept;

struct AgentGroup {
  Strategy strategy{Strategy::Zi};
  int count{1};
  double arrival_rate{0.005};
  // For HBL groups hbl.zi holds the ZI parameters; for ZI groups hbl is unused.
  HblParams hbl{};

  const ZiParams& zi() const noexcept { return hbl.zi; }
  bool operator==(const AgentGroup&) const = default;
};

struct OutputOptions {
  bool trace_estimator{false};
  bool trace_decisions{false};
  // Spacing of rows in fundamental.csv.
  TimeStep fundamental_interval{100};

  bool operator==(const OutputOptions&) const = default;
};

struct SimConfig {
  TimeStep horizon{10000};
  double tick_size{0.01};
  std::uint64_t master_seed{1};
  double sigma_n_sq{0.1};
  FundamentalConfig fundamental{};
  std::vector<AgentGroup> agents{};
  OutputOptions output{};

  PriceScale scale() const noexcept { return PriceScale{tick_size}; }
  int agent_count() const noexcept;
  // Throws ConfigError naming the offending key and constraint.
  void validate() const;
  // Non-fatal advice (e.g. megashock variance not exceeding the OU variance).
  std::vector<std::string> warnings() const;

  bool operator==(const SimConfig&) const = default;
};

// The agents' knowledge of the fundamental. OU variants map gamma to the per-step
// reversion kappa = 1 - exp(-gamma) and sigma_sq to the one-step OU variance.
EstimatorParams estimator_params(const SimConfig& config);

FundamentalSource make_fundamental(const SimConfig& config);

} // namespace cdasim
