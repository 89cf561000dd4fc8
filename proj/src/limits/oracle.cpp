#include "ale/limits/oracle.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>

#include "ale/errors.hpp"
#include "ale/limits/multiplier.hpp"
#include "ale/limits/time_change.hpp"

namespace ale::limits {

namespace {

// (e^{g x} - 1)/g with the g -> 0 limit.
double expm1_over(double g, double x) {
  if (std::abs(g) < kBranchEpsilon) return x;
  return std::expm1(g * x) / g;
}

// int_0^t w(s, tau_s) ds for the continuous-time clock. For zeta < 0 the integral is
// taken in u = tau_s (ds = e^{zeta u} du) so the t_zeta endpoint never appears.
double integrate_in_time(const std::function<double(double, double)>& weight, double t, double zeta) {
  if (t == 0.0) return 0.0;
  if (zeta >= 0.0) {
    return integrate([&](double s) { return weight(s, tau(s, zeta)); }, 0.0, t);
  }
  const double tau_t = tau(t, zeta);
  return integrate(
      [&](double u) {
        const double s = std::expm1(zeta * u) / zeta;
        return weight(s, u) * std::exp(zeta * u);
      },
      0.0, tau_t);
}

double mode_kappa(int k, double zeta) { return 1.0 + (1.0 - zeta) * static_cast<double>(k); }

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  using boost::math::quadrature::gauss_kronrod;
  double error = 0.0;
  return gauss_kronrod<double, 15>::integrate(f, a, b, 20, rel_tol, &error);
}

double ou_covariance(int k, double t, const ModelParams& params, OuFlavor flavor) {
  if (!(t >= 0.0)) throw DomainError("ou_covariance: negative time");
  const double alpha = params.alpha;
  const double eta = params.eta;
  const double zeta = params.zeta();

  switch (flavor) {
    case OuFlavor::Mode:
    case OuFlavor::Cap: {
      if (!(t < t_crit(zeta))) throw DomainError("ou_covariance: t beyond t_zeta");
      if (t == 0.0) return 0.0;
      // dGamma = e^{-alpha tau}(diffusion dB - drift_coeff Gamma e^{-eta tau} dt); the
      // integrated drift over [s, t] is drift_coeff (tau_t - tau_s) since dtau = e^{-zeta tau} dt.
      const bool mode = flavor == OuFlavor::Mode;
      const double drift_coeff = mode ? mode_kappa(k, zeta) : zeta;
      const double noise_intensity = mode ? 2.0 : 1.0;  // E|dB|^2 / dt
      const double diffusion_scale = mode ? std::sqrt(2.0) : 1.0;
      const double tau_t = tau(t, zeta);
      auto weight = [&](double, double tau_s) {
        const double diffusion = diffusion_scale * std::exp(-alpha * tau_s - 0.5 * eta * tau_s);
        return std::exp(-2.0 * drift_coeff * (tau_t - tau_s)) * diffusion * diffusion * noise_intensity;
      };
      return integrate_in_time(weight, t, zeta);
    }
    case OuFlavor::Disc: {
      if (!(t < n_crit(alpha))) throw DomainError("ou_covariance: nu beyond n_alpha");
      if (t == 0.0) return 0.0;
      const double kappa = mode_kappa(k, zeta);
      const double u_t = tau_disc(t, alpha, 1.0);
      if (alpha >= 0.0) {
        return integrate(
            [&](double s) {
              const double u_s = tau_disc(s, alpha, 1.0);
              const double damp = 1.0 / (1.0 + alpha * s);
              return 4.0 * std::exp(-2.0 * kappa * (u_t - u_s)) * damp * damp;
            },
            0.0, t);
      }
      // u-substitution, ds = (1 + alpha s) du = e^{alpha u} du.
      return integrate([&](double u) { return 4.0 * std::exp(-2.0 * kappa * (u_t - u) - alpha * u); }, 0.0, u_t);
    }
  }
  throw ConfigError("unknown covariance flavor");
}

double poisson_mode_variance(int k, double t, const ModelParams& params) {
  const double zeta = params.zeta();
  if (!(t >= 0.0) || !(t < t_crit(zeta))) throw DomainError("poisson_mode_variance: t outside [0, t_zeta)");
  if (t == 0.0) return 0.0;
  const double c = params.c;
  const double q = multiplier_q(k, zeta, params.sigma, Multiplier::Q);
  const double tau_t = tau(t, zeta);
  // |e^{i(k+1) theta}|^2 = 1, so the (2 pi)^{-1} d theta integral contributes a factor of 1.
  constexpr double angle_average = 1.0;
  auto weight = [&](double, double tau_s) {
    const double c_s = c * std::exp(-params.alpha * tau_s);
    const double lambda_s = std::exp(-params.eta * tau_s) / c;
    const double jump = 2.0 * c_s * std::exp(-(1.0 + q) * (tau_t - tau_s));
    return jump * jump * lambda_s * angle_average;
  };
  return integrate_in_time(weight, t, zeta) / c;
}

double LimitOracle::kappa(int k) const {
  const double zeta = params_.zeta();
  if (k < 0) return zeta;
  if (regularized_) return 1.0 + multiplier_q(k, zeta, params_.sigma, Multiplier::Q);
  return mode_kappa(k, zeta);
}

double LimitOracle::variance(int k, double t) const {
  if (k < 0) return ou_covariance(0, t, params_, OuFlavor::Cap);
  if (regularized_) return poisson_mode_variance(k, t, params_);
  return ou_covariance(k, t, params_, OuFlavor::Mode);
}

LimitPaths LimitOracle::simulate(int max_mode, const std::vector<double>& grid, Philox4x32& rng) const {
  if (max_mode < 0) throw ConfigError("simulate: max_mode must be nonnegative");
  const double alpha = params_.alpha;
  const double zeta = params_.zeta();
  std::normal_distribution<double> normal;

  LimitPaths out;
  out.times = grid;
  out.modes.reserve(grid.size());
  out.cap.reserve(grid.size());

  std::vector<std::complex<double>> modes(static_cast<std::size_t>(max_mode) + 1);
  double cap = 0.0;
  double t_prev = 0.0;
  double tau_prev = 0.0;
  for (double t : grid) {
    if (!(t >= t_prev)) throw ConfigError("simulate: time grid must be nondecreasing from 0");
    const double tau_next = tau(t, zeta);
    const double dtau = tau_next - tau_prev;
    if (dtau > 0.0) {
      // Var of the increment: int e^{-2 kappa (tau_b - tau_s)} e^{-(2 alpha + eta) tau_s} ds
      //   = e^{-2 kappa dtau} e^{-alpha tau_a} (e^{(2 kappa - alpha) dtau} - 1)/(2 kappa - alpha).
      for (int k = 0; k <= max_mode; ++k) {
        const double kap = kappa(k);
        const double var = 4.0 * std::exp(-2.0 * kap * dtau - alpha * tau_prev) * expm1_over(2.0 * kap - alpha, dtau);
        const double sd = std::sqrt(0.5 * var);
        const double re = normal(rng);
        const double im = normal(rng);
        auto& g = modes[static_cast<std::size_t>(k)];
        g = std::exp(-kap * dtau) * g + std::complex<double>(sd * re, sd * im);
      }
      const double var_cap = std::exp(-2.0 * zeta * dtau - alpha * tau_prev) * expm1_over(2.0 * zeta - alpha, dtau);
      cap = std::exp(-zeta * dtau) * cap + std::sqrt(var_cap) * normal(rng);
    }
    out.modes.push_back(modes);
    out.cap.push_back(cap);
    t_prev = t;
    tau_prev = tau_next;
  }
  return out;
}

LimitPaths simulate_limit_modes(int max_mode, const std::vector<double>& grid, const ModelParams& params,
                                Philox4x32& rng) {
  return LimitOracle(params, false).simulate(max_mode, grid, rng);
}

}  // namespace ale::limits
