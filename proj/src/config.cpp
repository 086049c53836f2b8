#include "cdasim/config.hpp"

#include <cmath>
#include <string>

namespace cdasim {

const char* to_string(Strategy s) noexcept { return s == Strategy::Zi ? "zi" : "hbl"; }

int SimConfig::agent_count() const noexcept {
  int n = 0;
  for (const auto& g : agents) n += g.count;
  return n;
}

namespace {

void require(bool ok, const std::string& key, const std::string& constraint) {
  if (!ok) throw ConfigError(key + ": " + constraint + " violated");
}

} // namespace

void SimConfig::validate() const {
  require(horizon >= 1, "market.horizon", "horizon >= 1");
  require(tick_size > 0.0 && std::isfinite(tick_size), "market.tick_size", "tick_size > 0");
  require(sigma_n_sq >= 0.0, "market.sigma_n_sq", "sigma_n_sq >= 0");

  const auto& f = fundamental;
  switch (f.kind) {
  case FundamentalKind::Dmr:
  case FundamentalKind::File:
    require(f.r_bar >= 0.0, "fundamental.r_bar", "r_bar >= 0");
    require(f.kappa >= 0.0 && f.kappa <= 1.0, "fundamental.kappa", "kappa in [0,1]");
    require(f.sigma_s_sq >= 0.0, "fundamental.sigma_s_sq", "sigma_s_sq >= 0");
    if (f.kind == FundamentalKind::File) require(!f.path.empty(), "fundamental.path", "path nonempty");
    break;
  case FundamentalKind::Megashock:
    require(f.shock_rate > 0.0, "fundamental.shock_rate", "shock_rate > 0");
    require(f.shock_mean > 0.0, "fundamental.shock_mean", "shock_mean > 0");
    require(f.shock_var > 0.0, "fundamental.shock_var", "shock_var > 0");
    [[fallthrough]];
  case FundamentalKind::Ou:
    require(f.mu >= 0.0, "fundamental.mu", "mu >= 0");
    require(f.q0 >= 0.0, "fundamental.q0", "q0 >= 0");
    require(f.gamma > 0.0, "fundamental.gamma", "gamma > 0");
    require(f.sigma_sq >= 0.0, "fundamental.sigma_sq", "sigma_sq >= 0");
    break;
  }

  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto& g = agents[i];
    const std::string key = "agents[" + std::to_string(i) + "].";
    const auto& zi = g.zi();
    require(g.count >= 0, key + "count", "count >= 0");
    require(g.arrival_rate > 0.0, key + "arrival_rate", "arrival_rate > 0");
    require(zi.r_min >= 0.0 && zi.r_min <= zi.r_max, key + "r_min", "0 <= r_min <= r_max");
    require(zi.eta >= 0.0 && zi.eta <= 1.0, key + "eta", "eta in [0,1]");
    require(zi.sigma_n_sq >= 0.0, key + "sigma_n_sq", "sigma_n_sq >= 0");
    require(zi.q_max >= 1, key + "q_max", "q_max >= 1");
    require(zi.sigma_pv_sq >= 0.0, key + "sigma_pv_sq", "sigma_pv_sq >= 0");
    if (g.strategy == Strategy::Hbl) {
      require(g.hbl.memory_length >= 1, key + "memory_length", "memory_length >= 1");
      require(g.hbl.grace_period >= 1, key + "grace_period", "grace_period >= 1");
      require(g.hbl.grid_extension >= 0, key + "grid_extension", "grid_extension >= 0");
    }
  }
  require(output.fundamental_interval >= 1, "output.fundamental_interval", "fundamental_interval >= 1");
}

std::vector<std::string> SimConfig::warnings() const {
  std::vector<std::string> out;
  if (fundamental.kind == FundamentalKind::Megashock && !(fundamental.shock_var > fundamental.sigma_sq))
    out.push_back("fundamental.shock_var should exceed fundamental.sigma_sq");
  if (fundamental.kind == FundamentalKind::Ou || fundamental.kind == FundamentalKind::Megashock)
    out.push_back("agents estimate with the discrete mean-reversion model; for non-dmr fundamentals this is an "
                  "approximation");
  return out;
}

EstimatorParams estimator_params(const SimConfig& config) {
  const auto scale = config.scale();
  const auto& f = config.fundamental;
  EstimatorParams p;
  p.sigma_n_sq = config.sigma_n_sq;
  p.horizon = config.horizon;
  if (f.kind == FundamentalKind::Dmr || f.kind == FundamentalKind::File) {
    p.r_bar = scale.to_real(scale.nearest(f.r_bar));
    p.kappa = f.kappa;
    p.sigma_s_sq = f.sigma_s_sq;
  } else {
    p.r_bar = scale.to_real(scale.nearest(f.mu));
    p.kappa = -std::expm1(-f.gamma);
    p.sigma_s_sq = f.sigma_sq / (2.0 * f.gamma) * -std::expm1(-2.0 * f.gamma);
  }
  return p;
}

FundamentalSource make_fundamental(const SimConfig& config) {
  const auto scale = config.scale();
  const auto& f = config.fundamental;
  const auto seed = config.master_seed;
  switch (f.kind) {
  case FundamentalKind::Dmr:
    return FundamentalSource(DmrSource(DmrParams{scale.nearest(f.r_bar), f.kappa, f.sigma_s_sq, seed, scale},
                                       config.horizon));
  case FundamentalKind::Ou:
    return FundamentalSource(
        OuSource(OuParams{scale.nearest(f.mu), f.gamma, f.sigma_sq, scale.nearest(f.q0), seed, scale}, config.horizon));
  case FundamentalKind::Megashock: {
    const OuParams ou{scale.nearest(f.mu), f.gamma, f.sigma_sq, scale.nearest(f.q0), seed, scale};
    return FundamentalSource(
        MegashockSource(MegashockParams{ou, f.shock_rate, f.shock_mean, f.shock_var, seed}, config.horizon));
  }
  case FundamentalKind::File: {
    auto table = load_fundamental_table(f.path, scale);
    if (table.rows.front().first > 0)
      throw ConfigError("fundamental.path: first timestamp must be <= 0 so the series covers t = 0");
    return FundamentalSource(FileSource(std::move(table)));
  }
  }
  throw ConfigError("fundamental.kind: unknown kind");
}

} // namespace cdasim
