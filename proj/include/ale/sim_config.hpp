#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ale/params.hpp"

namespace ale {

enum class RunMode { Continuous, Discrete };

/// sigma is either given explicitly or derived from c as sigma = c^exponent.
struct SigmaRule {
  enum class Kind { Explicit, Exponent };
  Kind kind = Kind::Exponent;
  double value = 0.2;

  double resolve(double c) const;
  bool operator==(const SigmaRule&) const = default;
};

inline double SigmaRule::resolve(double c) const {
  return kind == Kind::Explicit ? value : std::pow(c, value);
}

/// Everything needed to reproduce a batch of runs. params.sigma always holds the
/// resolved value of sigma_rule (see harness::validate).
struct SimConfig {
  ModelParams params;
  SigmaRule sigma_rule;
  RunMode mode = RunMode::Continuous;
  double horizon = 1.0;      // T, continuous time
  std::int64_t steps = 0;    // N, discrete time
  int k_modes = 32;          // K
  double fluct_radius = 1.5;
  int grid_m = 512;          // M
  int snapshot_count = 32;
  int replicas = 1;
  std::uint64_t master_seed = 0;
  bool keep_events = true;
  std::uint64_t max_events = 10'000'000;
  double envelope_margin = 2.0;
  /// Rescan the derivative envelope once the particle count has grown by this fraction.
  double envelope_refresh = 0.125;
  std::string preset;
  /// Capacity list of the convergence sweep (strictly decreasing).
  std::vector<double> sweep_c{1e-2, 1e-3, 1e-4};

  bool operator==(const SimConfig&) const = default;
};

}  // namespace ale
