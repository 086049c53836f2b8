#include "cdasim/fundamental.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

namespace cdasim {

namespace {

Ticks to_grid(double x, const PriceScale& scale) {
  return std::max<Ticks>(0, scale.nearest(x));
}

void check_time(TimeStep t, TimeStep horizon) {
  if (t < 0 || t > horizon)
    throw std::out_of_range("time " + std::to_string(t) + " outside [0, " + std::to_string(horizon) + "]");
}

} // namespace

// ---- discrete mean reversion ----

void DmrParams::validate() const {
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw ConfigError("kappa in [0,1] violated");
  if (!(sigma_s_sq >= 0.0)) throw ConfigError("sigma_s_sq >= 0 violated");
  if (r_bar < 0) throw ConfigError("r_bar >= 0 violated");
  if (!(scale.tick_size > 0.0)) throw ConfigError("tick_size > 0 violated");
}

Ticks dmr_step(Ticks prev, const DmrParams& params, double noise_draw) {
  const auto& s = params.scale;
  const double next = params.kappa * s.to_real(params.r_bar) + (1.0 - params.kappa) * s.to_real(prev) + noise_draw;
  return to_grid(std::max(0.0, next), s);
}

DmrSource::DmrSource(DmrParams params, TimeStep horizon, std::optional<Ticks> start)
  : params_(params), horizon_(horizon), rng_(params.seed, "fundamental") {
  params_.validate();
  if (horizon < 0) throw ConfigError("horizon >= 0 violated");
  prefix_.reserve(static_cast<std::size_t>(std::min<TimeStep>(horizon, 1 << 20)) + 1);
  prefix_.push_back(start.value_or(params_.r_bar));
}

Ticks DmrSource::value_at(TimeStep t) {
  check_time(t, horizon_);
  const double sd = std::sqrt(params_.sigma_s_sq);
  while (static_cast<TimeStep>(prefix_.size()) <= t)
    prefix_.push_back(dmr_step(prefix_.back(), params_, sd * rng_.normal()));
  return prefix_[static_cast<std::size_t>(t)];
}

// ---- Ornstein-Uhlenbeck ----

void OuParams::validate() const {
  if (!(gamma > 0.0)) throw ConfigError("gamma > 0 violated");
  if (!(sigma_sq >= 0.0)) throw ConfigError("sigma_sq >= 0 violated");
  if (mu < 0 || q0 < 0) throw ConfigError("mu >= 0 and q0 >= 0 violated");
  if (!(scale.tick_size > 0.0)) throw ConfigError("tick_size > 0 violated");
}

std::pair<double, double> ou_moments(double q_prev, double elapsed, const OuParams& params) {
  if (!(elapsed > 0.0)) throw std::domain_error("OU elapsed time must be > 0");
  if (!(params.gamma > 0.0)) throw std::domain_error("OU gamma must be > 0");
  const double mu = params.scale.to_real(params.mu);
  const double mean = mu + (q_prev - mu) * std::exp(-params.gamma * elapsed);
  const double var = params.sigma_sq / (2.0 * params.gamma) * -std::expm1(-2.0 * params.gamma * elapsed);
  return {mean, var};
}

double ou_transition(double q_prev, double elapsed, const OuParams& params, double std_normal_draw) {
  const auto [mean, var] = ou_moments(q_prev, elapsed, params);
  return mean + std::sqrt(var) * std_normal_draw;
}

Ticks ou_sample(Ticks q_prev, double elapsed, const OuParams& params, double std_normal_draw) {
  return to_grid(ou_transition(params.scale.to_real(q_prev), elapsed, params, std_normal_draw), params.scale);
}

OuSource::OuSource(OuParams params, TimeStep horizon)
  : params_(params), horizon_(horizon), rng_(params.seed, "fundamental"), value_(params.scale.to_real(params.q0)) {
  params_.validate();
}

void OuSource::advance_to(double time) {
  if (time < time_) throw OrderingError("OU fundamental queried backwards in time");
  if (time == time_) return;
  value_ = ou_transition(value_, time - time_, params_, rng_.normal());
  time_ = time;
}

void OuSource::floor_state() noexcept { value_ = std::max(0.0, value_); }

Ticks OuSource::value_at(TimeStep t) {
  check_time(t, horizon_);
  advance_to(static_cast<double>(t));
  return to_grid(value_, params_.scale);
}

// ---- megashock OU ----

void MegashockParams::validate() const {
  ou.validate();
  if (!(arrival_rate > 0.0)) throw ConfigError("arrival_rate > 0 violated");
  if (!(shock_mean > 0.0)) throw ConfigError("shock_mean > 0 violated");
  if (!(shock_var > 0.0)) throw ConfigError("shock_var > 0 violated");
}

std::vector<std::string> MegashockParams::warnings() const {
  std::vector<std::string> out;
  if (!(shock_var > ou.sigma_sq))
    out.push_back("megashock shock_var should exceed the OU sigma_sq for shocks to stand out");
  return out;
}

double megashock_draw(const MegashockParams& params, Rng& sizes) {
  const double lobe = sizes.coin() ? params.shock_mean : -params.shock_mean;
  return sizes.normal(lobe, params.shock_var);
}

MegashockSource::MegashockSource(MegashockParams params, TimeStep horizon)
  : params_(params), ou_(params.ou, horizon), arrivals_(params.seed, "megashock-arrivals"),
    sizes_(params.seed, "megashock-sizes") {
  params_.validate();
  next_arrival_ = arrivals_.exponential(params_.arrival_rate);
}

Ticks MegashockSource::value_at(TimeStep t) {
  check_time(t, ou_.horizon());
  if (t < last_query_) throw OrderingError("megashock fundamental queried backwards in time");
  while (next_arrival_ <= static_cast<double>(t)) {
    ou_.advance_to(next_arrival_);
    const double size = megashock_draw(params_, sizes_);
    ou_.shift_state(size);
    ou_.floor_state();
    shocks_.push_back({next_arrival_, size});
    next_arrival_ += arrivals_.exponential(params_.arrival_rate);
  }
  last_query_ = t;
  return ou_.value_at(t);
}

// ---- tabulated series ----

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

} // namespace

FundamentalTable parse_fundamental_table(std::istream& in, const PriceScale& scale) {
  FundamentalTable table;
  std::string raw;
  std::size_t lineno = 0;
  bool seen_content = false;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto cut = line.find_first_of(",;\t ");
    if (cut == std::string_view::npos) throw ParseError(lineno, "expected two columns `timestamp,value`");
    const auto ts_field = trim(line.substr(0, cut));
    const auto val_field = trim(line.substr(cut + 1));
    TimeStep ts{};
    if (!parse_number(ts_field, ts)) {
      if (!seen_content) { // header row
        seen_content = true;
        continue;
      }
      throw ParseError(lineno, "timestamp is not an integer: '" + std::string(ts_field) + "'");
    }
    seen_content = true;
    double value{};
    if (!parse_number(val_field, value) || !std::isfinite(value))
      throw ParseError(lineno, "value is not a decimal number: '" + std::string(val_field) + "'");
    if (value < 0.0) throw ParseError(lineno, "value must be non-negative");
    if (!table.rows.empty() && ts <= table.rows.back().first)
      throw ParseError(lineno, "timestamps must be strictly increasing");
    table.rows.emplace_back(ts, scale.nearest(value));
  }
  if (table.rows.empty()) throw ParseError(lineno, "fundamental table has no rows");
  return table;
}

FundamentalTable load_fundamental_table(const std::string& path, const PriceScale& scale) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fundamental table '" + path + "'");
  try {
    return parse_fundamental_table(in, scale);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.detail(), path);
  }
}

void write_fundamental_table(std::ostream& out, const std::vector<std::pair<TimeStep, Ticks>>& rows,
                             const PriceScale& scale) {
  out << "timestamp,value\n";
  for (const auto& [t, v] : rows) out << t << ',' << scale.format(v) << '\n';
}

Ticks file_value_at(TimeStep t, const FundamentalTable& table) {
  if (table.rows.empty()) throw std::domain_error("empty fundamental table");
  auto it = std::upper_bound(table.rows.begin(), table.rows.end(), t,
                             [](TimeStep x, const auto& row) { return x < row.first; });
  if (it == table.rows.begin())
    throw std::domain_error("time " + std::to_string(t) + " precedes the first table timestamp");
  return std::prev(it)->second;
}

FileSource::FileSource(FundamentalTable table) : table_(std::move(table)) {
  if (table_.rows.empty()) throw ConfigError("fundamental table must be nonempty");
}

// ---- dispatch ----

const char* to_string(FundamentalKind k) noexcept {
  switch (k) {
  case FundamentalKind::Dmr: return "dmr";
  case FundamentalKind::Ou: return "ou";
  case FundamentalKind::Megashock: return "megashock";
  case FundamentalKind::File: return "file";
  }
  return "?";
}

Ticks FundamentalSource::value_at(TimeStep t) {
  return std::visit([t](auto& src) { return src.value_at(t); }, impl_);
}

} // namespace cdasim
