#include "ale/limits/time_change.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ale/errors.hpp"

namespace ale::limits {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log(1 + a x)/a with its a -> 0 series.
double log1p_ratio(double a, double x) {
  if (std::abs(a) < kBranchEpsilon) return x - 0.5 * a * x * x;
  return std::log1p(a * x) / a;
}

// (e^{a x} - 1)/a with its a -> 0 series.
double expm1_ratio(double a, double x) {
  if (std::abs(a) < kBranchEpsilon) return x + 0.5 * a * x * x;
  return std::expm1(a * x) / a;
}

}  // namespace

double t_crit(double zeta) { return zeta < 0.0 ? 1.0 / -zeta : kInf; }

double n_crit(double alpha) { return alpha < 0.0 ? 1.0 / -alpha : kInf; }

double tau(double t, double zeta) {
  if (!(t >= 0.0) || !(t < t_crit(zeta))) {
    throw DomainError("tau: t = " + std::to_string(t) + " outside [0, t_zeta)");
  }
  return log1p_ratio(zeta, t);
}

double tau_rate(double t, double zeta) { return std::exp(-zeta * tau(t, zeta)); }

double nu(double t, double alpha, double zeta) { return expm1_ratio(alpha, tau(t, zeta)); }

double time_for_nu(double nu_value, double alpha, double zeta) {
  if (!(nu_value >= 0.0) || !(nu_value < n_crit(alpha))) {
    throw DomainError("time_for_nu: nu outside [0, n_alpha)");
  }
  const double u = log1p_ratio(alpha, nu_value);
  const double t = expm1_ratio(zeta, u);
  if (!(t < t_crit(zeta))) throw DomainError("time_for_nu: image beyond t_zeta");
  return t;
}

double tau_disc(double n, double alpha, double c) {
  if (!(c > 0.0)) throw DomainError("tau_disc: c must be positive");
  if (!(n >= 0.0) || !(n < n_crit(alpha) / c)) {
    throw DomainError("tau_disc: n = " + std::to_string(n) + " outside [0, n_alpha/c)");
  }
  return log1p_ratio(alpha, c * n);
}

}  // namespace ale::limits
