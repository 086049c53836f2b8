// Batch driver: one run or a seed sweep, each writing CSVs and a manifest.
#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "cdasim/config_io.hpp"
#include "cdasim/kernel.hpp"
#include "cdasim/output.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitInvariant = 2;

// Sweep runs report from worker threads; keep their lines whole.
std::mutex console;

struct RunSpec {
  std::string config_path;
  std::vector<std::string> overrides;
  std::filesystem::path out_dir{"out"};
  std::string sweep;
  bool trace_estimator{false};
  bool trace_decisions{false};
  bool fundamental_dump{false};
  bool print_config{false};
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cdasim::ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::pair<std::uint64_t, std::uint64_t> parse_sweep(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw cdasim::ConfigError("--sweep-seeds expects a..b");
  try {
    const auto a = std::stoull(text.substr(0, dots));
    const auto b = std::stoull(text.substr(dots + 2));
    if (b < a) throw cdasim::ConfigError("--sweep-seeds: upper bound below lower bound");
    return {a, b};
  } catch (const std::logic_error&) {
    throw cdasim::ConfigError("--sweep-seeds expects two non-negative integers a..b");
  }
}

// Resolves the config text for one run: file, flag-level overrides, then --set.
cdasim::SimConfig resolve(const RunSpec& spec, std::optional<std::uint64_t> seed) {
  std::string text = spec.config_path.empty() ? "{}" : read_file(spec.config_path);
  for (const auto& o : spec.overrides) text = cdasim::apply_override(text, o);
  if (seed) text = cdasim::apply_override(text, "market.seed=" + std::to_string(*seed));
  if (spec.trace_estimator) text = cdasim::apply_override(text, "output.trace_estimator=true");
  if (spec.trace_decisions) text = cdasim::apply_override(text, "output.trace_decisions=true");
  if (spec.fundamental_dump) text = cdasim::apply_override(text, "output.fundamental_interval=1");
  return cdasim::parse_config(text);
}

int run_one(const cdasim::SimConfig& config, const std::filesystem::path& dir) {
  cdasim::SimResult result;
  try {
    result = cdasim::run(config);
  } catch (const cdasim::InvariantError& e) {
    const std::lock_guard lock(console);
    std::cerr << "invariant breach: " << e.what() << '\n';
    return kExitInvariant;
  }
  cdasim::emit_outputs(result, config, dir);
  const std::lock_guard lock(console);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  if (!result.invariants.ok()) {
    for (const auto& v : result.invariants.violations) std::cerr << "invariant breach: " << v << '\n';
    return kExitInvariant;
  }
  std::cout << dir.string() << ": " << result.trades.size() << " trades, r_T = "
            << result.scale.format(result.final_fundamental) << '\n';
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous double auction simulator with ZI and HBL agents"};
  RunSpec spec;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", spec.config_path, "JSON experiment config (defaults used when omitted)");
  app.add_option("--seed", seed, "Master seed override");
  app.add_option("--out", spec.out_dir, "Output directory")->capture_default_str();
  app.add_option("--sweep-seeds", spec.sweep, "Run seeds a..b (inclusive) into <out>/seed-<n>");
  app.add_option("--set", spec.overrides, "Config override key.path=value (repeatable)");
  app.add_flag("--trace-estimator", spec.trace_estimator, "Write estimator_trace.csv");
  app.add_flag("--trace-decisions", spec.trace_decisions, "Write decisions.csv");
  app.add_flag("--fundamental-dump", spec.fundamental_dump, "Write the fundamental at every step");
  app.add_flag("--print-config", spec.print_config, "Print the resolved config and exit");
  CLI11_PARSE(app, argc, argv);

  try {
    if (spec.sweep.empty()) {
      const auto config = resolve(spec, seed);
      if (spec.print_config) {
        std::cout << cdasim::config_to_json(config) << '\n';
        return kExitOk;
      }
      return run_one(config, spec.out_dir);
    }

    const auto [first, last] = parse_sweep(spec.sweep);
    std::vector<cdasim::SimConfig> configs;
    for (auto s = first; s <= last; ++s) configs.push_back(resolve(spec, s));

    const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    int worst = kExitOk;
    for (std::size_t begin = 0; begin < configs.size(); begin += workers) {
      std::vector<std::future<int>> batch;
      for (std::size_t i = begin; i < std::min(configs.size(), begin + workers); ++i) {
        const auto dir = spec.out_dir / ("seed-" + std::to_string(configs[i].master_seed));
        batch.push_back(std::async(std::launch::async, [&, i, dir] { return run_one(configs[i], dir); }));
      }
      for (auto& f : batch) worst = std::max(worst, f.get());
    }
    return worst;
  } catch (const cdasim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const cdasim::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
