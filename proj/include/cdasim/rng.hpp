#pragma once
#include <cstdint>
#include <random>
#include <string_view>

namespace cdasim {

// Stable 64-bit hash of a stream label (FNV-1a).
std::uint64_t hash_label(std::string_view label) noexcept;

// Seed for a named child stream of a master seed. Labels are stable, so adding a
// stream never perturbs another one.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label) noexcept;

// Deterministic random stream. The distributions are implemented here rather than
// taken from <random> because the standard leaves their algorithms unspecified.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t master, std::string_view label) : engine_(derive_seed(master, label)) {}

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  // Standard normal via Box-Muller; consumes exactly two uniforms.
  double normal() noexcept;
  double normal(double mean, double variance) noexcept;
  // Exponential with the given rate; consumes one uniform.
  double exponential(double rate) noexcept;
  bool coin() noexcept { return uniform() < 0.5; }

private:
  std::mt19937_64 engine_;
};

} // namespace cdasim
