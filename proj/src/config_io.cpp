#include "cdasim/config_io.hpp"

#include <cmath>
#include <set>
#include <string>

#include "config_json.hpp"

namespace cdasim {

using json = nlohmann::json;

namespace {

// Population used when a config has no `agents` section.
const json& default_agents() {
  static const json agents = json::array({{{"strategy", "zi"}, {"count", 25}}, {{"strategy", "hbl"}, {"count", 5}}});
  return agents;
}

// Strict reader over one JSON object: tracks consumed keys so leftovers can be reported.
class Section {
public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  double number(const std::string& key, double fallback) {
    const json* v = take(key);
    if (!v) return fallback;
    if (!v->is_number()) throw ConfigError(name(key) + ": expected a number");
    const double d = v->get<double>();
    if (!std::isfinite(d)) throw ConfigError(name(key) + ": expected a finite number");
    return d;
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback) {
    const json* v = take(key);
    if (!v) return fallback;
    if (!v->is_number_integer()) throw ConfigError(name(key) + ": expected an integer");
    return v->get<std::int64_t>();
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    const json* v = take(key);
    if (!v) return fallback;
    if (!v->is_number_integer() || (!v->is_number_unsigned() && v->get<std::int64_t>() < 0))
      throw ConfigError(name(key) + ": expected a non-negative integer");
    return v->get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool fallback) {
    const json* v = take(key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ConfigError(name(key) + ": expected true or false");
    return v->get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    const json* v = take(key);
    if (!v) return fallback;
    if (!v->is_string()) throw ConfigError(name(key) + ": expected a string");
    return v->get<std::string>();
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  void finish() const {
    for (const auto& [key, value] : node_.items())
      if (!used_.contains(key)) throw ConfigError("unknown key '" + name(key) + "'");
  }

private:
  const json* take(const std::string& key) {
    used_.insert(key);
    auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }
  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& node_;
  std::string path_;
  std::set<std::string> used_;
};

FundamentalKind parse_kind(const std::string& s) {
  if (s == "dmr") return FundamentalKind::Dmr;
  if (s == "ou") return FundamentalKind::Ou;
  if (s == "megashock") return FundamentalKind::Megashock;
  if (s == "file") return FundamentalKind::File;
  throw ConfigError("fundamental.kind: expected one of dmr, ou, megashock, file");
}

AgentGroup parse_group(const json& node, const std::string& path, double market_sigma_n_sq) {
  Section s(node, path);
  AgentGroup g;
  const auto strategy = s.string("strategy", "zi");
  if (strategy == "zi")
    g.strategy = Strategy::Zi;
  else if (strategy == "hbl")
    g.strategy = Strategy::Hbl;
  else
    throw ConfigError(path + ".strategy: expected zi or hbl");

  g.count = static_cast<int>(s.integer("count", g.count));
  g.arrival_rate = s.number("arrival_rate", g.arrival_rate);
  auto& zi = g.hbl.zi;
  zi.r_min = s.number("r_min", zi.r_min);
  zi.r_max = s.number("r_max", zi.r_max);
  zi.eta = s.number("eta", zi.eta);
  zi.q_max = static_cast<int>(s.integer("q_max", zi.q_max));
  zi.sigma_pv_sq = s.number("sigma_pv_sq", zi.sigma_pv_sq);
  zi.sigma_n_sq = s.number("sigma_n_sq", market_sigma_n_sq);

  if (g.strategy == Strategy::Hbl) {
    auto& h = g.hbl;
    h.memory_length = static_cast<int>(s.integer("memory_length", h.memory_length));
    // Default grace period: the mean time between this group's arrivals.
    const auto grace_default =
        g.arrival_rate > 0.0 ? std::max<TimeStep>(1, std::llround(1.0 / g.arrival_rate)) : h.grace_period;
    h.grace_period = s.integer("grace_period", grace_default);
    const auto mode = s.string("success_mode", "binary");
    if (mode == "binary")
      h.success_mode = SuccessMode::Binary;
    else if (mode == "fractional")
      h.success_mode = SuccessMode::Fractional;
    else
      throw ConfigError(path + ".success_mode: expected binary or fractional");
    const auto grid = s.string("grid", "observed");
    if (grid == "observed")
      h.grid_mode = GridMode::Observed;
    else if (grid == "spline")
      h.grid_mode = GridMode::Spline;
    else
      throw ConfigError(path + ".grid: expected observed or spline");
    h.grid_extension = static_cast<int>(s.integer("grid_extension", h.grid_extension));
  }
  s.finish();
  return g;
}

} // namespace

SimConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (root.is_null()) root = json::object();
  if (!root.is_object()) throw ConfigError("config: expected a JSON object at top level");

  SimConfig c;
  static const json empty = json::object();
  const auto section = [&](const char* key) -> const json& {
    return root.contains(key) ? root.at(key) : empty;
  };
  {
    Section s(section("market"), "market");
    c.horizon = s.integer("horizon", c.horizon);
    c.tick_size = s.number("tick_size", c.tick_size);
    c.master_seed = s.unsigned_integer("seed", c.master_seed);
    c.sigma_n_sq = s.number("sigma_n_sq", c.sigma_n_sq);
    s.finish();
  }
  {
    Section s(section("fundamental"), "fundamental");
    auto& f = c.fundamental;
    f.kind = parse_kind(s.string("kind", "dmr"));
    switch (f.kind) {
    case FundamentalKind::File:
      f.path = s.string("path", "");
      [[fallthrough]];
    case FundamentalKind::Dmr:
      f.r_bar = s.number("r_bar", f.r_bar);
      f.kappa = s.number("kappa", f.kappa);
      f.sigma_s_sq = s.number("sigma_s_sq", f.sigma_s_sq);
      break;
    case FundamentalKind::Megashock:
      f.shock_rate = s.number("shock_rate", f.shock_rate);
      f.shock_mean = s.number("shock_mean", f.shock_mean);
      f.shock_var = s.number("shock_var", f.shock_var);
      [[fallthrough]];
    case FundamentalKind::Ou:
      f.mu = s.number("mu", f.mu);
      f.gamma = s.number("gamma", f.gamma);
      f.sigma_sq = s.number("sigma_sq", f.sigma_sq);
      f.q0 = s.number("q0", f.mu);
      break;
    }
    s.finish();
  }
  if (root.contains("agents")) {
    const auto& list = root.at("agents");
    if (!list.is_array()) throw ConfigError("agents: expected an array");
    for (std::size_t i = 0; i < list.size(); ++i)
      c.agents.push_back(parse_group(list[i], "agents[" + std::to_string(i) + "]", c.sigma_n_sq));
  } else {
    const auto& list = default_agents();
    for (std::size_t i = 0; i < list.size(); ++i)
      c.agents.push_back(parse_group(list[i], "agents[" + std::to_string(i) + "]", c.sigma_n_sq));
  }
  {
    Section s(section("output"), "output");
    c.output.trace_estimator = s.boolean("trace_estimator", c.output.trace_estimator);
    c.output.trace_decisions = s.boolean("trace_decisions", c.output.trace_decisions);
    c.output.fundamental_interval = s.integer("fundamental_interval", c.output.fundamental_interval);
    s.finish();
  }
  for (const auto& [key, value] : root.items())
    if (key != "market" && key != "fundamental" && key != "agents" && key != "output")
      throw ConfigError("unknown key '" + key + "'");

  c.validate();
  return c;
}

namespace detail {

nlohmann::ordered_json to_json_value(const SimConfig& c) {
  using ojson = nlohmann::ordered_json;
  ojson root;
  root["market"] = {{"horizon", c.horizon},
                    {"tick_size", c.tick_size},
                    {"seed", c.master_seed},
                    {"sigma_n_sq", c.sigma_n_sq}};
  const auto& f = c.fundamental;
  ojson fund;
  fund["kind"] = to_string(f.kind);
  switch (f.kind) {
  case FundamentalKind::File:
    fund["path"] = f.path;
    [[fallthrough]];
  case FundamentalKind::Dmr:
    fund["r_bar"] = f.r_bar;
    fund["kappa"] = f.kappa;
    fund["sigma_s_sq"] = f.sigma_s_sq;
    break;
  case FundamentalKind::Megashock:
  case FundamentalKind::Ou:
    fund["mu"] = f.mu;
    fund["gamma"] = f.gamma;
    fund["sigma_sq"] = f.sigma_sq;
    fund["q0"] = f.q0;
    if (f.kind == FundamentalKind::Megashock) {
      fund["shock_rate"] = f.shock_rate;
      fund["shock_mean"] = f.shock_mean;
      fund["shock_var"] = f.shock_var;
    }
    break;
  }
  root["fundamental"] = fund;
  root["agents"] = ojson::array();
  for (const auto& g : c.agents) {
    const auto& zi = g.zi();
    ojson a = {{"strategy", to_string(g.strategy)}, {"count", g.count},       {"arrival_rate", g.arrival_rate},
               {"r_min", zi.r_min},                 {"r_max", zi.r_max},       {"eta", zi.eta},
               {"q_max", zi.q_max},                 {"sigma_pv_sq", zi.sigma_pv_sq}, {"sigma_n_sq", zi.sigma_n_sq}};
    if (g.strategy == Strategy::Hbl) {
      a["memory_length"] = g.hbl.memory_length;
      a["grace_period"] = g.hbl.grace_period;
      a["success_mode"] = g.hbl.success_mode == SuccessMode::Binary ? "binary" : "fractional";
      a["grid"] = g.hbl.grid_mode == GridMode::Observed ? "observed" : "spline";
      a["grid_extension"] = g.hbl.grid_extension;
    }
    root["agents"].push_back(a);
  }
  root["output"] = {{"trace_estimator", c.output.trace_estimator},
                    {"trace_decisions", c.output.trace_decisions},
                    {"fundamental_interval", c.output.fundamental_interval}};
  return root;
}

} // namespace detail

std::string config_to_json(const SimConfig& config, int indent) {
  return detail::to_json_value(config).dump(indent);
}

std::string apply_override(std::string_view config_text, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ConfigError("override '" + std::string(assignment) + "' must look like key.path=value");
  const std::string path(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));

  json root;
  try {
    root = config_text.empty() ? json::object()
                               : json::parse(config_text.begin(), config_text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: expected a JSON object at top level");
  if (path.starts_with("agents.") && !root.contains("agents")) root["agents"] = default_agents();
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }

  json* node = &root;
  std::size_t pos = 0;
  while (true) {
    const auto dot = path.find('.', pos);
    const std::string part = path.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (part.empty()) throw ConfigError("override '" + path + "' has an empty path segment");
    json* next = nullptr;
    if (node->is_array()) {
      std::size_t idx{};
      try {
        idx = std::stoul(part);
      } catch (const std::exception&) {
        throw ConfigError("override '" + path + "': '" + part + "' is not an array index");
      }
      if (idx >= node->size()) throw ConfigError("override '" + path + "': index " + part + " out of range");
      next = &(*node)[idx];
    } else {
      if (node->is_null()) *node = json::object();
      if (!node->is_object()) throw ConfigError("override '" + path + "': '" + part + "' is not inside an object");
      next = &(*node)[part];
    }
    if (dot == std::string::npos) {
      *next = value;
      break;
    }
    node = next;
    pos = dot + 1;
  }
  return root.dump(2);
}

} // namespace cdasim
