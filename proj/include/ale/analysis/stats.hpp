#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ale/analysis/fluct.hpp"

namespace ale::analysis {

/// Sample moments of a complex (or real, imaginary part zero) scalar.
struct Moments {
  std::size_t n = 0;
  cplx mean;
  /// E|X - m|^2 with the 1/(n-1) normalization.
  double var = 0.0;
  double var_re = 0.0;
  double var_im = 0.0;
  /// Standard error of var: sqrt((m4 - m2^2)/n) with m4 = mean |X - m|^4.
  double var_se = 0.0;
  /// Excess kurtosis of each component; NaN for a constant component.
  double kurt_re = 0.0;
  double kurt_im = 0.0;
};

Moments sample_moments(std::span<const cplx> x);
Moments sample_moments(std::span<const double> x);

/// Linear-interpolation quantile (q in [0, 1]) of an unsorted sample.
double quantile(std::vector<double> x, double q);
inline double median(std::vector<double> x) { return quantile(std::move(x), 0.5); }

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Gaussianity screen threshold 4 sqrt(24/N) on |excess kurtosis|.
double kurtosis_limit(std::size_t n);

struct StatThresholds {
  /// Relative band on variances against the oracle.
  double var_band = 0.20;
  /// Means must lie within this many standard errors of 0.
  double mean_sigmas = 3.0;
};

/// Oracle variances per quantity; absent entries give rows without a variance verdict.
struct OracleVariances {
  std::function<double(int)> mode;
  std::optional<double> cap;
  std::function<double(int)> pi_mode;
  std::optional<double> pi_cap;
};

struct ModeStat {
  std::string kind;  // mode, cap, pi_mode, pi_cap
  int k = 0;         // 0 for the cap rows
  Moments m;
  double mean_se_re = 0.0;
  double mean_se_im = 0.0;
  /// Largest |component mean| / its standard error.
  double z_mean = 0.0;
  bool mean_ok = true;
  bool gaussian_ok = true;
  std::optional<double> oracle_var;
  double z_var = 0.0;
  double rel_err = 0.0;
  bool var_ok = true;
  bool pass() const { return mean_ok && gaussian_ok && var_ok; }
};

struct StatReport {
  std::size_t replicas = 0;
  double t = 0.0;
  StatThresholds thresholds;
  std::vector<ModeStat> rows;
  bool pass() const;
  const ModeStat* find(const std::string& kind, int k) const;
};

/// Per-mode statistics over replicas at a common time. Requires at least 30 samples,
/// all taken at the same t with the same mode count.
StatReport replica_stats(std::span<const FluctSample> samples, const OracleVariances& oracle = {},
                         const StatThresholds& thresholds = {});

/// CSV, one row per quantity, with a one-line header.
void write_report_csv(std::ostream& out, const StatReport& report);
/// Full report as JSON text; `config_hash` is stamped in when given.
std::string report_json(const StatReport& report, const std::string& config_hash = {});

}  // namespace ale::analysis
