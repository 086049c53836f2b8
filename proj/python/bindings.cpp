#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>
#include <sstream>

#include "cdasim/config_io.hpp"
#include "cdasim/kernel.hpp"
#include "cdasim/output.hpp"

namespace py = pybind11;
using namespace cdasim;

namespace {

py::dict summarize(const SimResult& r) {
  py::dict d;
  d["final_fundamental"] = r.scale.to_real(r.final_fundamental);
  d["trades"] = r.trades.size();
  d["events"] = r.events.size();
  d["invariants_ok"] = r.invariants.ok();
  d["violations"] = r.invariants.violations;
  d["warnings"] = r.warnings;
  py::list agents;
  for (const auto& a : r.agents) {
    py::dict row;
    row["id"] = a.id;
    row["strategy"] = to_string(a.strategy);
    row["cash"] = r.scale.to_real(a.cash_ticks);
    row["q"] = a.q_held;
    row["payoff"] = a.payoff;
    row["wakes"] = a.wakes;
    agents.append(row);
  }
  d["agents"] = agents;
  py::list fundamental;
  for (const auto& [t, v] : r.fundamental) fundamental.append(py::make_tuple(t, r.scale.to_real(v)));
  d["fundamental"] = fundamental;
  return d;
}

template <class Writer>
std::string render(Writer writer, const SimResult& r) {
  std::ostringstream out;
  writer(out, r);
  return out.str();
}

} // namespace

PYBIND11_MODULE(_cdasim, m) {
  m.doc() = "Continuous double auction simulator core";
  m.attr("__version__") = CDASIM_VERSION;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<OrderingError>(m, "OrderingError", PyExc_ValueError);
  py::register_exception<HoldingsLimitError>(m, "HoldingsLimitError", PyExc_IndexError);

  py::enum_<Side>(m, "Side").value("BUY", Side::Buy).value("SELL", Side::Sell);

  py::class_<PriceScale>(m, "PriceScale")
    .def(py::init<double>(), py::arg("tick_size") = 0.01)
    .def_readwrite("tick_size", &PriceScale::tick_size)
    .def("to_real", &PriceScale::to_real)
    .def("nearest", &PriceScale::nearest)
    .def("floor", &PriceScale::floor)
    .def("ceil", &PriceScale::ceil)
    .def("format", &PriceScale::format);

  py::class_<Rng>(m, "Rng")
    .def(py::init<std::uint64_t>())
    .def(py::init<std::uint64_t, std::string_view>())
    .def("uniform", py::overload_cast<>(&Rng::uniform))
    .def("normal", py::overload_cast<>(&Rng::normal))
    .def("exponential", &Rng::exponential)
    .def("coin", &Rng::coin);

  // fundamental
  py::class_<DmrParams>(m, "DmrParams")
    .def(py::init([](Ticks r_bar, double kappa, double sigma_s_sq, std::uint64_t seed, PriceScale scale) {
           return DmrParams{r_bar, kappa, sigma_s_sq, seed, scale};
         }),
         py::arg("r_bar"), py::arg("kappa"), py::arg("sigma_s_sq"), py::arg("seed") = 0,
         py::arg("scale") = PriceScale{0.01})
    .def_readwrite("r_bar", &DmrParams::r_bar)
    .def_readwrite("kappa", &DmrParams::kappa)
    .def_readwrite("sigma_s_sq", &DmrParams::sigma_s_sq);
  m.def("dmr_step", &dmr_step, py::arg("prev"), py::arg("params"), py::arg("noise"));
  py::class_<DmrSource>(m, "DmrSource")
    .def(py::init<DmrParams, TimeStep>(), py::arg("params"), py::arg("horizon"))
    .def("value_at", &DmrSource::value_at);

  py::class_<OuParams>(m, "OuParams")
    .def(py::init([](Ticks mu, double gamma, double sigma_sq, Ticks q0, std::uint64_t seed, PriceScale scale) {
           return OuParams{mu, gamma, sigma_sq, q0, seed, scale};
         }),
         py::arg("mu"), py::arg("gamma"), py::arg("sigma_sq"), py::arg("q0"), py::arg("seed") = 0,
         py::arg("scale") = PriceScale{0.01});
  m.def("ou_moments", &ou_moments, py::arg("q_prev"), py::arg("elapsed"), py::arg("params"));
  m.def("ou_transition", &ou_transition, py::arg("q_prev"), py::arg("elapsed"), py::arg("params"), py::arg("z"));
  m.def("ou_sample", &ou_sample, py::arg("q_prev"), py::arg("elapsed"), py::arg("params"), py::arg("z"));

  // estimator
  py::class_<EstimatorParams>(m, "EstimatorParams")
    .def(py::init([](double r_bar, double kappa, double sigma_s_sq, double sigma_n_sq, TimeStep horizon) {
           return EstimatorParams{r_bar, kappa, sigma_s_sq, sigma_n_sq, horizon};
         }),
         py::arg("r_bar"), py::arg("kappa"), py::arg("sigma_s_sq"), py::arg("sigma_n_sq"), py::arg("horizon"));
  py::class_<BeliefState>(m, "BeliefState")
    .def(py::init([](double r, double v, TimeStep t) { return BeliefState{r, v, t}; }), py::arg("r_tilde"),
         py::arg("sigma_tilde_sq"), py::arg("last_wake"))
    .def_static("initial", &BeliefState::initial)
    .def_readonly("r_tilde", &BeliefState::r_tilde)
    .def_readonly("sigma_tilde_sq", &BeliefState::sigma_tilde_sq)
    .def_readonly("last_wake", &BeliefState::last_wake)
    .def("__eq__", [](const BeliefState& a, const BeliefState& b) { return a == b; });
  m.def("advance", &advance, py::arg("belief"), py::arg("now"), py::arg("params"));
  m.def("observe", &observe, py::arg("belief"), py::arg("observation"), py::arg("params"));
  m.def("project_final", &project_final, py::arg("belief"), py::arg("params"));

  // preferences
  py::class_<PrivateValues>(m, "PrivateValues")
    .def(py::init<int, std::vector<double>>(), py::arg("q_max"), py::arg("theta"))
    .def("theta", &PrivateValues::theta)
    .def("realized", &PrivateValues::realized)
    .def("can_buy", &PrivateValues::can_buy)
    .def("can_sell", &PrivateValues::can_sell)
    .def_property_readonly("values", [](const PrivateValues& pv) {
      return std::vector<double>(pv.values().begin(), pv.values().end());
    });
  m.def("draw_private_values", &draw_private_values, py::arg("q_max"), py::arg("sigma_pv_sq"), py::arg("rng"));
  m.def("total_valuation", &total_valuation, py::arg("pv"), py::arg("q_held"), py::arg("side"), py::arg("r_hat"));

  // order book
  py::enum_<EventKind>(m, "EventKind")
    .value("PLACED", EventKind::Placed)
    .value("EXECUTED", EventKind::Executed)
    .value("CANCELLED", EventKind::Cancelled);
  py::class_<BookEvent>(m, "BookEvent")
    .def_readonly("kind", &BookEvent::kind)
    .def_readonly("time", &BookEvent::time)
    .def_readonly("order_id", &BookEvent::order_id)
    .def_readonly("agent_id", &BookEvent::agent_id)
    .def_readonly("side", &BookEvent::side)
    .def_readonly("price", &BookEvent::price)
    .def_readonly("quantity", &BookEvent::quantity)
    .def_readonly("counterparty", &BookEvent::counterparty)
    .def_readonly("trade_id", &BookEvent::trade_id);
  py::class_<Trade>(m, "Trade")
    .def_readonly("id", &Trade::id)
    .def_readonly("time", &Trade::time)
    .def_readonly("price", &Trade::price)
    .def_readonly("quantity", &Trade::quantity)
    .def_readonly("buy_order", &Trade::buy_order)
    .def_readonly("sell_order", &Trade::sell_order)
    .def_readonly("buyer", &Trade::buyer)
    .def_readonly("seller", &Trade::seller);
  py::class_<OrderBook>(m, "OrderBook")
    .def(py::init<>())
    .def(
        "place_limit",
        [](OrderBook& b, OrderId id, AgentId agent, Side side, Ticks limit, std::int64_t qty, TimeStep now) {
          return b.place_limit(Order{id, agent, side, limit, qty, now}, now);
        },
        py::arg("order_id"), py::arg("agent"), py::arg("side"), py::arg("limit"), py::arg("quantity") = 1,
        py::arg("now") = 0)
    .def("cancel", &OrderBook::cancel, py::arg("order_id"), py::arg("now"))
    .def("best_bid", &OrderBook::best_bid)
    .def("best_ask", &OrderBook::best_ask)
    .def("is_resting", &OrderBook::is_resting)
    .def("crossed", &OrderBook::crossed)
    .def_property_readonly("events",
                           [](const OrderBook& b) { return std::vector<BookEvent>(b.events().begin(), b.events().end()); })
    .def_property_readonly("trades",
                           [](const OrderBook& b) { return std::vector<Trade>(b.trades().begin(), b.trades().end()); });

  // agents
  py::class_<MarketView>(m, "MarketView")
    .def(py::init([](std::optional<Ticks> bid, std::optional<Ticks> ask) { return MarketView{bid, ask}; }),
         py::arg("best_bid") = py::none(), py::arg("best_ask") = py::none());
  py::enum_<AgentAction::Kind>(m, "ActionKind")
    .value("PLACE", AgentAction::Kind::Place)
    .value("TAKE", AgentAction::Kind::Take)
    .value("SKIP", AgentAction::Kind::Skip);
  py::class_<AgentAction>(m, "AgentAction")
    .def_readonly("kind", &AgentAction::kind)
    .def_readonly("side", &AgentAction::side)
    .def_readonly("limit", &AgentAction::limit)
    .def_readonly("valuation", &AgentAction::valuation)
    .def_readonly("requested_surplus", &AgentAction::requested_surplus)
    .def_readonly("expected_surplus", &AgentAction::expected_surplus)
    .def_readonly("belief", &AgentAction::belief)
    .def_readonly("fallback", &AgentAction::fallback);
  py::class_<ZiParams>(m, "ZiParams")
    .def(py::init<>())
    .def_readwrite("r_min", &ZiParams::r_min)
    .def_readwrite("r_max", &ZiParams::r_max)
    .def_readwrite("eta", &ZiParams::eta)
    .def_readwrite("sigma_n_sq", &ZiParams::sigma_n_sq)
    .def_readwrite("q_max", &ZiParams::q_max)
    .def_readwrite("sigma_pv_sq", &ZiParams::sigma_pv_sq);
  py::enum_<SuccessMode>(m, "SuccessMode").value("BINARY", SuccessMode::Binary).value("FRACTIONAL", SuccessMode::Fractional);
  py::enum_<GridMode>(m, "GridMode").value("OBSERVED", GridMode::Observed).value("SPLINE", GridMode::Spline);
  py::class_<HblParams>(m, "HblParams")
    .def(py::init<>())
    .def_readwrite("zi", &HblParams::zi)
    .def_readwrite("memory_length", &HblParams::memory_length)
    .def_readwrite("grace_period", &HblParams::grace_period)
    .def_readwrite("success_mode", &HblParams::success_mode)
    .def_readwrite("grid_mode", &HblParams::grid_mode)
    .def_readwrite("grid_extension", &HblParams::grid_extension);
  py::class_<OrderOutcome>(m, "OrderOutcome")
    .def_readonly("id", &OrderOutcome::id)
    .def_readonly("side", &OrderOutcome::side)
    .def_readonly("price", &OrderOutcome::price)
    .def_readonly("placed_at", &OrderOutcome::placed_at)
    .def_readonly("success", &OrderOutcome::success)
    .def_readonly("failure", &OrderOutcome::failure);
  py::class_<HblMemory>(m, "HblMemory")
    .def(py::init<>())
    .def_readonly("orders", &HblMemory::orders)
    .def_readonly("transactions", &HblMemory::transactions);

  m.def("zi_limit", &zi_limit, py::arg("side"), py::arg("valuation"), py::arg("requested_surplus"), py::arg("market"),
        py::arg("eta"), py::arg("scale"));
  m.def("zi_decide", &zi_decide, py::arg("q_held"), py::arg("pv"), py::arg("r_hat"), py::arg("market"),
        py::arg("params"), py::arg("scale"), py::arg("rng"));
  m.def(
      "hbl_classify",
      [](const OrderBook& book, TimeStep now, const HblParams& params) {
        return hbl_classify(book.events(), now, params);
      },
      py::arg("book"), py::arg("now"), py::arg("params"));
  m.def("hbl_belief", &hbl_belief, py::arg("memory"), py::arg("price"), py::arg("side"));
  m.def("hbl_decide", &hbl_decide, py::arg("q_held"), py::arg("pv"), py::arg("r_hat"), py::arg("memory"),
        py::arg("market"), py::arg("params"), py::arg("scale"), py::arg("rng"));

  // configuration and runs
  m.def("normalize_config", [](const std::string& text) { return config_to_json(parse_config(text)); },
        py::arg("config_json"), "Parse, validate and re-emit a config with every default filled in.");
  m.def(
      "run",
      [](const std::string& text) {
        const auto config = parse_config(text);
        SimResult r;
        {
          py::gil_scoped_release release;
          r = run(config);
        }
        return summarize(r);
      },
      py::arg("config_json"), "Run one simulation and return a summary dict.");
  m.def(
      "run_to",
      [](const std::string& text, const std::string& out_dir) {
        const auto config = parse_config(text);
        SimResult r;
        {
          py::gil_scoped_release release;
          r = run(config);
          emit_outputs(r, config, std::filesystem::path(out_dir));
        }
        return summarize(r);
      },
      py::arg("config_json"), py::arg("out_dir"), "Run one simulation and write its output files.");
  m.def(
      "run_csv",
      [](const std::string& text) {
        const auto r = run(parse_config(text));
        py::dict d;
        d["events"] = render(write_events_csv, r);
        d["trades"] = render(write_trades_csv, r);
        d["fundamental"] = render(write_fundamental_csv, r);
        d["agents"] = render(write_agents_csv, r);
        return d;
      },
      py::arg("config_json"), "Run one simulation and return its CSV outputs as strings.");
}
