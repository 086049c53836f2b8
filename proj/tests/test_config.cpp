#include <doctest.h>

#include <cmath>
#include <string>

#include "cdasim/config_io.hpp"

using namespace cdasim;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

} // namespace

TEST_CASE("empty config takes the documented defaults") {
  const auto c = parse_config("{}");
  CHECK(c.horizon == 10000);
  CHECK(c.tick_size == 0.01);
  CHECK(c.master_seed == 1);
  CHECK(c.fundamental.kind == FundamentalKind::Dmr);
  REQUIRE(c.agents.size() == 2);
  CHECK(c.agents[0].strategy == Strategy::Zi);
  CHECK(c.agents[0].count == 25);
  CHECK(c.agents[1].strategy == Strategy::Hbl);
  CHECK(c.agents[1].count == 5);
  CHECK(c.agents[1].hbl.grace_period == std::llround(1.0 / c.agents[1].arrival_rate));
}

TEST_CASE("constraint errors name the key and the constraint") {
  const auto e = error_of(R"({"fundamental":{"kappa":1.5}})");
  CHECK(e.find("fundamental.kappa") != std::string::npos);
  CHECK(e.find("kappa in [0,1]") != std::string::npos);
  CHECK(error_of(R"({"market":{"tick_size":0}})").find("market.tick_size") != std::string::npos);
  CHECK(error_of(R"({"agents":[{"eta":2}]})").find("eta in [0,1]") != std::string::npos);
}

TEST_CASE("unknown keys and type mismatches are rejected") {
  CHECK(error_of(R"({"market":{"horizn":5}})").find("market.horizn") != std::string::npos);
  CHECK(error_of(R"({"extra":{}})").find("extra") != std::string::npos);
  CHECK(error_of(R"({"market":{"horizon":"long"}})").find("market.horizon") != std::string::npos);
  CHECK(error_of(R"({"market":{"horizon":1.5}})").find("expected an integer") != std::string::npos);
  CHECK(error_of(R"({"agents":[{"strategy":"gd"}]})").find("strategy") != std::string::npos);
  CHECK(error_of(R"({"agents":[{"strategy":"zi","memory_length":3}]})").find("memory_length") != std::string::npos);
  CHECK_FALSE(error_of("{not json").empty());
}

TEST_CASE("echoed config parses back to the same value") {
  const char* texts[] = {
    "{}",
    R"({"market":{"horizon":777,"seed":9,"tick_size":0.05},"fundamental":{"kind":"ou","gamma":0.02,"mu":101}})",
    R"({"fundamental":{"kind":"megashock","shock_rate":0.001},"agents":[{"strategy":"hbl","count":3,"success_mode":"fractional","grid":"spline"}]})",
    R"({"output":{"trace_estimator":true,"fundamental_interval":7},"agents":[{"strategy":"zi","count":2,"r_min":0.1,"r_max":0.4}]})",
  };
  for (const char* t : texts) {
    const auto c = parse_config(t);
    const auto echoed = config_to_json(c);
    CHECK(parse_config(echoed) == c);
    CHECK(config_to_json(parse_config(echoed)) == echoed);
  }
}

TEST_CASE("overrides") {
  auto text = apply_override("{}", "market.horizon=123");
  CHECK(parse_config(text).horizon == 123);
  text = apply_override(text, "agents.1.count=0");
  const auto c = parse_config(text);
  CHECK(c.agents[1].count == 0);
  CHECK(c.agents[0].count == 25);
  CHECK(parse_config(apply_override("{}", "fundamental.kind=ou")).fundamental.kind == FundamentalKind::Ou);
  CHECK(parse_config(apply_override("{}", "output.trace_decisions=true")).output.trace_decisions);
  CHECK_THROWS_AS(apply_override("{}", "no-equals-sign"), ConfigError);
}

TEST_CASE("estimator mapping") {
  auto c = parse_config(R"({"fundamental":{"kind":"ou","gamma":0.1,"sigma_sq":2,"mu":90}})");
  const auto e = estimator_params(c);
  CHECK(e.r_bar == doctest::Approx(90));
  CHECK(e.kappa == doctest::Approx(1 - std::exp(-0.1)));
  CHECK(e.sigma_s_sq == doctest::Approx(2 * (1 - std::exp(-0.2)) / 0.2));
  CHECK(e.horizon == c.horizon);

  const auto d = estimator_params(parse_config(R"({"fundamental":{"kappa":0.2,"sigma_s_sq":3}})"));
  CHECK(d.kappa == 0.2);
  CHECK(d.sigma_s_sq == 3);
}

TEST_CASE("file fundamental must cover time zero") {
  CHECK(error_of(R"({"fundamental":{"kind":"file"}})").find("fundamental.path") != std::string::npos);
}

TEST_CASE("megashock advice") {
  const auto c = parse_config(R"({"fundamental":{"kind":"megashock","shock_var":0.001,"sigma_sq":0.01}})");
  CHECK_FALSE(c.warnings().empty());
}
