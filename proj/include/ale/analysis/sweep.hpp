#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ale/sim_config.hpp"

namespace ale::analysis {

/// Metrics reported by the sweep.
inline constexpr const char* kCapError = "cap_sup_err";      // sup_t |T_t - tau_t|
inline constexpr const char* kShapeError = "shape_err";      // max over |z| = r of |Phi-hat_T(z) - z|

struct SweepRow {
  double c = 0.0;
  double sigma = 0.0;
  std::string metric;
  double median = 0.0;
  double p90 = 0.0;
  std::size_t n_replicas = 0;
  /// Runs dropped because their thinning envelope was violated or the event cap hit.
  std::size_t excluded = 0;
  std::vector<double> values;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  /// Log-log slope of the median against c, per metric.
  std::map<std::string, double> slopes;
  std::vector<const SweepRow*> metric_rows(const std::string& metric) const;
};

/// Runs `replicas` continuous-time trajectories for each c (strictly decreasing list), with
/// sigma re-resolved from base.sigma_rule, and summarizes both error metrics. Replica i at
/// list position j uses seed stream_seed(stream_seed(base.master_seed, j), i).
SweepTable convergence_sweep(const SimConfig& base, std::span<const double> c_list, int replicas,
                             unsigned parallelism = 1);

/// CSV with header c,sigma,metric,median,p90,n_replicas,slope.
void write_sweep_csv(std::ostream& out, const SweepTable& table);

}  // namespace ale::analysis
