#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fdident {

enum class NoiseDistribution { gaussian, uniform, laplace };

inline const char* to_string(NoiseDistribution d) {
  switch (d) {
    case NoiseDistribution::gaussian: return "gaussian";
    case NoiseDistribution::uniform: return "uniform";
    case NoiseDistribution::laplace: return "laplace";
  }
  return "unknown";
}

inline NoiseDistribution distribution_from_string(const std::string& name) {
  if (name == "gaussian") return NoiseDistribution::gaussian;
  if (name == "uniform") return NoiseDistribution::uniform;
  if (name == "laplace") return NoiseDistribution::laplace;
  throw std::invalid_argument("distribution must be gaussian, uniform, or laplace, got '" + name +
                              "'");
}

// splitmix64 finalizer: a fixed bijection on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Seed for (run, experiment) derived bijectively from the base seed, so seeds
// within one configuration are pairwise distinct. Experiment slots are < 8.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t run, std::uint64_t experiment) {
  if (experiment >= 8) throw std::invalid_argument("derive_seed: experiment slot must be < 8");
  return mix64(base + 8 * run + experiment + 1);
}

// Self-contained generator so streams are reproducible byte-for-byte across
// toolchains; splitmix64 core with explicit output distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  // 53-bit uniforms; open variants keep log() finite.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform_open() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  double gaussian() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

  // Zero mean, unit variance for every distribution.
  double unit_variance(NoiseDistribution d) {
    switch (d) {
      case NoiseDistribution::gaussian:
        return gaussian();
      case NoiseDistribution::uniform:
        return (2.0 * uniform_open() - 1.0) * std::numbers::sqrt3;
      case NoiseDistribution::laplace: {
        const double w = uniform_open() - 0.5;
        const double b = 1.0 / std::numbers::sqrt2;
        return (w < 0.0 ? b : -b) * std::log(1.0 - 2.0 * std::abs(w));
      }
    }
    throw std::invalid_argument("unit_variance: unknown distribution");
  }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace fdident
