#include "cdasim/output.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "config_json.hpp"

#ifndef CDASIM_VERSION
#define CDASIM_VERSION "0.0.0"
#endif

namespace cdasim {

namespace {

std::string real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string fixed(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  writer(out);
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

} // namespace

void write_events_csv(std::ostream& out, const SimResult& r) {
  out << "time,kind,order_id,agent_id,side,price,qty,counterparty\n";
  for (const auto& e : r.events) {
    out << e.time << ',' << to_string(e.kind) << ',' << e.order_id << ',' << e.agent_id << ',' << to_string(e.side)
        << ',' << r.scale.format(e.price) << ',' << e.quantity << ',';
    if (e.counterparty >= 0) out << e.counterparty;
    out << '\n';
  }
}

void write_trades_csv(std::ostream& out, const SimResult& r) {
  out << "time,price,qty,buy_order,sell_order\n";
  for (const auto& t : r.trades)
    out << t.time << ',' << r.scale.format(t.price) << ',' << t.quantity << ',' << t.buy_order << ',' << t.sell_order
        << '\n';
}

void write_fundamental_csv(std::ostream& out, const SimResult& r) { write_fundamental_table(out, r.fundamental, r.scale); }

void write_agents_csv(std::ostream& out, const SimResult& r) {
  out << "id,strategy,cash,q,payoff\n";
  for (const auto& a : r.agents)
    out << a.id << ',' << to_string(a.strategy) << ',' << r.scale.format(a.cash_ticks) << ',' << a.q_held << ','
        << fixed(a.payoff) << '\n';
}

void write_estimator_trace_csv(std::ostream& out, const SimResult& r) {
  out << "time,agent,delta,observation,r_tilde,sigma_tilde_sq,r_hat\n";
  for (const auto& row : r.estimator_trace)
    out << row.time << ',' << row.agent << ',' << row.delta << ',' << r.scale.format(row.observation) << ','
        << real(row.r_tilde) << ',' << real(row.sigma_tilde_sq) << ',' << real(row.r_hat) << '\n';
}

void write_decision_trace_csv(std::ostream& out, const SimResult& r) {
  out << "time,agent,strategy,action,side,limit,valuation,requested_surplus,expected_surplus,belief,grid_size,"
         "fallback\n";
  for (const auto& row : r.decision_trace) {
    const auto& a = row.action;
    const bool skip = a.kind == AgentAction::Kind::Skip;
    out << row.time << ',' << row.agent << ',' << to_string(row.strategy) << ',' << to_string(a.kind) << ','
        << (skip ? "" : to_string(a.side)) << ',' << (skip ? "" : r.scale.format(a.limit)) << ',' << real(a.valuation)
        << ',' << real(a.requested_surplus) << ',' << real(a.expected_surplus) << ',' << real(a.belief) << ','
        << a.grid_size << ',' << (a.fallback ? 1 : 0) << '\n';
  }
}

std::string manifest_json(const SimConfig& config, const SimResult& r) {
  nlohmann::ordered_json m;
  m["version"] = CDASIM_VERSION;
  m["config"] = detail::to_json_value(config);
  m["seeds"] = nlohmann::ordered_json::object();
  for (const auto& [label, seed] : r.seeds) m["seeds"][label] = seed;
  m["final_fundamental"] = r.scale.to_real(r.final_fundamental);
  m["counts"] = {{"agents", r.agents.size()}, {"events", r.events.size()}, {"trades", r.trades.size()}};
  m["invariants"] = {{"ok", r.invariants.ok()},
                     {"trades_checked", r.invariants.trades_checked},
                     {"wakes", r.invariants.wakes},
                     {"violations", r.invariants.violations}};
  m["warnings"] = r.warnings;
  auto& pvs = m["private_values"] = nlohmann::ordered_json::array();
  for (const auto& a : r.agents) {
    const auto values = a.private_values.values();
    pvs.push_back({{"agent", a.id},
                   {"q_max", a.private_values.q_max()},
                   {"theta", std::vector<double>(values.begin(), values.end())}});
  }
  return m.dump(2) + "\n";
}

void emit_outputs(const SimResult& result, const SimConfig& config, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());

  write_file(dir / "events.csv", [&](std::ostream& o) { write_events_csv(o, result); });
  write_file(dir / "trades.csv", [&](std::ostream& o) { write_trades_csv(o, result); });
  write_file(dir / "fundamental.csv", [&](std::ostream& o) { write_fundamental_csv(o, result); });
  write_file(dir / "agents.csv", [&](std::ostream& o) { write_agents_csv(o, result); });
  write_file(dir / "manifest.json", [&](std::ostream& o) { o << manifest_json(config, result); });
  if (config.output.trace_estimator)
    write_file(dir / "estimator_trace.csv", [&](std::ostream& o) { write_estimator_trace_csv(o, result); });
  if (config.output.trace_decisions)
    write_file(dir / "decisions.csv", [&](std::ostream& o) { write_decision_trace_csv(o, result); });
}

} // namespace cdasim
