#include "ale/analysis/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "ale/errors.hpp"

namespace ale::analysis {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kMinReplicas = 30;

double excess_kurtosis(double m2, double m4) {
  if (!(m2 > 0.0)) return kNaN;
  return m4 / (m2 * m2) - 3.0;
}

nlohmann::json number_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

}  // namespace

Moments sample_moments(std::span<const cplx> x) {
  Moments m;
  m.n = x.size();
  if (m.n < 2) throw ConfigError("moments need at least two samples");
  for (const auto& v : x) m.mean += v;
  m.mean /= static_cast<double>(m.n);
  double s2 = 0.0, s4 = 0.0, r2 = 0.0, r4 = 0.0, i2 = 0.0, i4 = 0.0;
  for (const auto& v : x) {
    const cplx d = v - m.mean;
    const double a = std::norm(d);
    s2 += a;
    s4 += a * a;
    const double dr = d.real() * d.real();
    const double di = d.imag() * d.imag();
    r2 += dr;
    r4 += dr * dr;
    i2 += di;
    i4 += di * di;
  }
  const double n = static_cast<double>(m.n);
  m.var = s2 / (n - 1.0);
  m.var_re = r2 / (n - 1.0);
  m.var_im = i2 / (n - 1.0);
  const double m2 = s2 / n;
  m.var_se = std::sqrt(std::max(s4 / n - m2 * m2, 0.0) / n);
  m.kurt_re = excess_kurtosis(r2 / n, r4 / n);
  m.kurt_im = excess_kurtosis(i2 / n, i4 / n);
  return m;
}

Moments sample_moments(std::span<const double> x) {
  std::vector<cplx> z(x.begin(), x.end());
  Moments m = sample_moments(z);
  m.kurt_im = kNaN;
  return m;
}

double quantile(std::vector<double> x, double q) {
  if (x.empty()) throw ConfigError("quantile of an empty sample");
  std::sort(x.begin(), x.end());
  const double pos = q * static_cast<double>(x.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (pos - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("slope fit needs at least two matching points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

double kurtosis_limit(std::size_t n) { return 4.0 * std::sqrt(24.0 / static_cast<double>(n)); }

bool StatReport::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const ModeStat& r) { return r.pass(); });
}

const ModeStat* StatReport::find(const std::string& kind, int k) const {
  for (const auto& r : rows) {
    if (r.kind == kind && r.k == k) return &r;
  }
  return nullptr;
}

namespace {

ModeStat make_row(std::string kind, int k, const Moments& m, bool is_real, std::optional<double> oracle,
                  const StatThresholds& thr) {
  ModeStat row;
  row.kind = std::move(kind);
  row.k = k;
  row.m = m;
  const double n = static_cast<double>(m.n);
  row.mean_se_re = std::sqrt(m.var_re / n);
  row.mean_se_im = std::sqrt(m.var_im / n);
  auto z = [](double mean, double se) {
    if (se > 0.0) return std::abs(mean) / se;
    return mean == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  };
  row.z_mean = z(m.mean.real(), row.mean_se_re);
  if (!is_real) row.z_mean = std::max(row.z_mean, z(m.mean.imag(), row.mean_se_im));
  row.mean_ok = row.z_mean <= thr.mean_sigmas;

  const double lim = kurtosis_limit(m.n);
  row.gaussian_ok = std::isfinite(m.kurt_re) && std::abs(m.kurt_re) <= lim;
  if (!is_real) row.gaussian_ok = row.gaussian_ok && std::isfinite(m.kurt_im) && std::abs(m.kurt_im) <= lim;

  row.oracle_var = oracle;
  if (oracle) {
    row.rel_err = m.var / *oracle - 1.0;
    row.z_var = m.var_se > 0.0 ? (m.var - *oracle) / m.var_se : kNaN;
    row.var_ok = std::abs(row.rel_err) <= thr.var_band;
  }
  return row;
}

}  // namespace

StatReport replica_stats(std::span<const FluctSample> samples, const OracleVariances& oracle,
                         const StatThresholds& thresholds) {
  if (samples.size() < kMinReplicas) {
    throw ConfigError("replica_stats needs at least 30 replicas, got " + std::to_string(samples.size()));
  }
  const auto& first = samples.front();
  const std::size_t modes = first.modes.size();
  for (const auto& s : samples) {
    if (s.t != first.t || s.modes.size() != modes) throw ConfigError("replica samples differ in time or mode count");
  }
  const bool with_pi = std::all_of(samples.begin(), samples.end(), [&](const FluctSample& s) {
    return s.has_pi && s.pi_modes.size() == modes;
  });

  StatReport report;
  report.replicas = samples.size();
  report.t = first.t;
  report.thresholds = thresholds;

  std::vector<cplx> column(samples.size());
  std::vector<double> real_column(samples.size());
  for (std::size_t k = 0; k < modes; ++k) {
    for (std::size_t i = 0; i < samples.size(); ++i) column[i] = samples[i].modes[k];
    std::optional<double> o;
    if (oracle.mode) o = oracle.mode(static_cast<int>(k));
    report.rows.push_back(make_row("mode", static_cast<int>(k), sample_moments(column), false, o, thresholds));
  }
  for (std::size_t i = 0; i < samples.size(); ++i) real_column[i] = samples[i].cap;
  report.rows.push_back(make_row("cap", 0, sample_moments(real_column), true, oracle.cap, thresholds));

  if (with_pi) {
    for (std::size_t k = 0; k < modes; ++k) {
      for (std::size_t i = 0; i < samples.size(); ++i) column[i] = samples[i].pi_modes[k];
      std::optional<double> o;
      if (oracle.pi_mode) o = oracle.pi_mode(static_cast<int>(k));
      report.rows.push_back(make_row("pi_mode", static_cast<int>(k), sample_moments(column), false, o, thresholds));
    }
    for (std::size_t i = 0; i < samples.size(); ++i) real_column[i] = samples[i].pi_cap;
    report.rows.push_back(make_row("pi_cap", 0, sample_moments(real_column), true, oracle.pi_cap, thresholds));
  }
  return report;
}

void write_report_csv(std::ostream& out, const StatReport& report) {
  out << "kind,k,n,t,mean_re,mean_im,mean_se_re,mean_se_im,z_mean,var,var_se,oracle_var,rel_err,z_var,"
         "kurt_re,kurt_im,kurt_limit,verdict\n";
  const double lim = kurtosis_limit(report.replicas);
  auto num = [&](double x) -> std::ostream& {
    if (std::isfinite(x)) {
      out << x;
    }
    return out;
  };
  out.precision(17);
  for (const auto& r : report.rows) {
    out << r.kind << ',' << r.k << ',' << r.m.n << ',' << report.t << ',';
    num(r.m.mean.real()) << ',';
    num(r.m.mean.imag()) << ',';
    num(r.mean_se_re) << ',';
    num(r.mean_se_im) << ',';
    num(r.z_mean) << ',';
    num(r.m.var) << ',';
    num(r.m.var_se) << ',';
    if (r.oracle_var) {
      num(*r.oracle_var) << ',';
      num(r.rel_err) << ',';
      num(r.z_var) << ',';
    } else {
      out << ",,,";
    }
    num(r.m.kurt_re) << ',';
    num(r.m.kurt_im) << ',';
    num(lim) << ',' << (r.pass() ? "pass" : "fail") << '\n';
  }
}

std::string report_json(const StatReport& report, const std::string& config_hash) {
  nlohmann::json j;
  if (!config_hash.empty()) j["config_hash"] = config_hash;
  j["replicas"] = report.replicas;
  j["t"] = report.t;
  j["thresholds"] = {{"var_band", report.thresholds.var_band},
                     {"mean_sigmas", report.thresholds.mean_sigmas},
                     {"kurtosis_limit", kurtosis_limit(report.replicas)}};
  j["pass"] = report.pass();
  auto& rows = j["rows"] = nlohmann::json::array();
  for (const auto& r : report.rows) {
    nlohmann::json row{{"kind", r.kind},
                       {"k", r.k},
                       {"n", r.m.n},
                       {"mean", {number_or_null(r.m.mean.real()), number_or_null(r.m.mean.imag())}},
                       {"mean_se", {number_or_null(r.mean_se_re), number_or_null(r.mean_se_im)}},
                       {"z_mean", number_or_null(r.z_mean)},
                       {"var", number_or_null(r.m.var)},
                       {"var_se", number_or_null(r.m.var_se)},
                       {"excess_kurtosis", {number_or_null(r.m.kurt_re), number_or_null(r.m.kurt_im)}},
                       {"mean_ok", r.mean_ok},
                       {"gaussian_ok", r.gaussian_ok},
                       {"var_ok", r.var_ok},
                       {"verdict", r.pass() ? "pass" : "fail"}};
    if (r.oracle_var) {
      row["oracle_var"] = *r.oracle_var;
      row["rel_err"] = number_or_null(r.rel_err);
      row["z_var"] = number_or_null(r.z_var);
    } else {
      row["oracle_var"] = nullptr;
    }
    rows.push_back(std::move(row));
  }
  return j.dump(2);
}

}  // namespace ale::analysis
