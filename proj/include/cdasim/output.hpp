#pragma once
#include <filesystem>
#include <iosfwd>
#include <string>

#include "cdasim/config.hpp"
#include "cdasim/kernel.hpp"

namespace cdasim {

// events.csv: time,kind,order_id,agent_id,side,price,qty,counterparty
void write_events_csv(std::ostream& out, const SimResult& result);
// trades.csv: time,price,qty,buy_order,sell_order
void write_trades_csv(std::ostream& out, const SimResult& result);
// fundamental.csv: timestamp,value (loadable as a file fundamental)
void write_fundamental_csv(std::ostream& out, const SimResult& result);
// agents.csv: id,strategy,cash,q,payoff
void write_agents_csv(std::ostream& out, const SimResult& result);
// estimator_trace.csv: time,agent,delta,observation,r_tilde,sigma_tilde_sq,r_hat
void write_estimator_trace_csv(std::ostream& out, const SimResult& result);
// decisions.csv: time,agent,strategy,action,side,limit,valuation,requested_surplus,expected_surplus,belief,grid_size,fallback
void write_decision_trace_csv(std::ostream& out, const SimResult& result);

// Config echo, resolved stream seeds, version, invariant summary, warnings and
// every agent's private value vector.
std::string manifest_json(const SimConfig& config, const SimResult& result);

// Writes all of the above into `dir` (created if needed). Trace files are written only
// when the corresponding trace was recorded. Throws std::runtime_error naming the path
// on I/O failure.
void emit_outputs(const SimResult& result, const SimConfig& config, const std::filesystem::path& dir);

} // namespace cdasim
