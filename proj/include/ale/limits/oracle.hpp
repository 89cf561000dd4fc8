#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "ale/params.hpp"
#include "ale/rng.hpp"

namespace ale::limits {

enum class OuFlavor { Mode, Cap, Disc };

/// Adaptive Gauss-Kronrod (7/15) integral of f over [a, b] at relative tolerance rel_tol.
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-10);

/// Variance of the limit fluctuation processes, obtained by quadrature of the
/// SDE coefficients:
///   Mode: E|Gamma_t(k)|^2 = 4 int_0^t e^{-2 kappa (tau_t - tau_s)} e^{-(2 alpha + eta) tau_s} ds,
///         kappa = 1 + (1 - zeta) k, with E|B_t(k)|^2 = 2t.
///   Cap:  Var Gamma^cap_t = int_0^t e^{-2 zeta (tau_t - tau_s)} e^{-(2 alpha + eta) tau_s} ds.
///   Disc: E|Gamma~^disc_t(k)|^2 for the particle-count-time process,
///         4 int_0^t e^{-2 kappa (u_t - u_s)} (1 + alpha s)^{-2} ds, u_s = log(1 + alpha s)/alpha.
/// Throws DomainError past t_zeta (or n_alpha for Disc).
double ou_covariance(int k, double t, const ModelParams& params, OuFlavor flavor);

/// Second moment of the rescaled Poisson integral c^{-1/2} Pi_t(k), computed from the
/// Poisson random measure intensity (angle integral included) with the sigma-regularized
/// multiplier q(k). Equals ou_covariance(k, t, ., Mode) when sigma = 0.
double poisson_mode_variance(int k, double t, const ModelParams& params);

/// Sampled paths of the limit processes on a time grid.
struct LimitPaths {
  std::vector<double> times;
  /// modes[i][k] = Gamma_{times[i]}(k).
  std::vector<std::vector<std::complex<double>>> modes;
  std::vector<double> cap;
};

/// Deterministic limit data for one parameter set.
class LimitOracle {
 public:
  /// regularized = true uses kappa = 1 + q(k) with the sigma of params, matching
  /// poisson_mode_variance; false uses the sigma -> 0 limit kappa = 1 + (1 - zeta) k.
  explicit LimitOracle(ModelParams params, bool regularized = false)
      : params_(params), regularized_(regularized) {}

  const ModelParams& params() const { return params_; }
  bool regularized() const { return regularized_; }

  /// Mode relaxation rate kappa(k).
  double kappa(int k) const;
  /// Variance of mode k (or cap when k < 0) at time t.
  double variance(int k, double t) const;

  /// Exact Gaussian transitions between consecutive grid times (closed form in tau).
  /// The grid must be nondecreasing, start at t >= 0 and stay below t_zeta.
  LimitPaths simulate(int max_mode, const std::vector<double>& grid, Philox4x32& rng) const;

 private:
  ModelParams params_;
  bool regularized_;
};

/// Free-function form of LimitOracle::simulate with the sigma -> 0 drift.
LimitPaths simulate_limit_modes(int max_mode, const std::vector<double>& grid, const ModelParams& params,
                                Philox4x32& rng);

}  // namespace ale::limits
