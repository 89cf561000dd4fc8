#pragma once

namespace ale::limits {

/// Below this magnitude zeta (or alpha) is treated as zero and series branches are used.
inline constexpr double kBranchEpsilon = 1e-12;

/// Blow-up horizon t_zeta: infinity for zeta >= 0, 1/|zeta| otherwise.
double t_crit(double zeta);
/// Disk-solution capacity tau_t = log(1 + zeta t)/zeta (tau_t = t at zeta = 0).
/// Throws DomainError unless 0 <= t < t_zeta.
double tau(double t, double zeta);
/// d tau/dt = e^{-zeta tau_t}.
double tau_rate(double t, double zeta);
/// nu_t = int_0^t e^{-eta tau_s} ds = ((1 + zeta t)^{alpha/zeta} - 1)/alpha.
double nu(double t, double alpha, double zeta);
/// Inverse of nu: t(nu) = ((1 + alpha nu)^{zeta/alpha} - 1)/zeta.
double time_for_nu(double nu_value, double alpha, double zeta);

/// Particle-count horizon n_alpha: infinity for alpha >= 0, 1/|alpha| otherwise.
double n_crit(double alpha);
/// Discrete-time capacity tau^disc_n = log(1 + alpha c n)/alpha (= c n at alpha = 0).
/// Throws DomainError unless 0 <= n < n_alpha/c.
double tau_disc(double n, double alpha, double c);

/// Bundles the deterministic time changes for one (alpha, eta) pair.
class TimeChange {
 public:
  TimeChange(double alpha, double eta) : alpha_(alpha), eta_(eta) {}

  double alpha() const { return alpha_; }
  double eta() const { return eta_; }
  double zeta() const { return alpha_ + eta_; }

  double t_crit() const { return limits::t_crit(zeta()); }
  double n_crit() const { return limits::n_crit(alpha_); }
  double tau(double t) const { return limits::tau(t, zeta()); }
  double nu(double t) const { return limits::nu(t, alpha_, zeta()); }
  double tau_disc(double n, double c) const { return limits::tau_disc(n, alpha_, c); }

 private:
  double alpha_;
  double eta_;
};

}  // namespace ale::limits
