#include "ale/analysis/fluct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ale/errors.hpp"
#include "ale/limits/multiplier.hpp"
#include "ale/limits/time_change.hpp"

namespace ale::analysis {

std::vector<cplx> fluct_modes(const conformal::ClusterMap& phi, const ModelParams& params,
                              const conformal::LaurentGrid& grid) {
  auto series = conformal::laurent_coeffs(phi, grid);
  const double scale = 1.0 / std::sqrt(params.c);
  for (auto& a : series.coeffs) a *= scale;
  return std::move(series.coeffs);
}

double cap_fluct(const chain::Trajectory& traj, double t) {
  const ModelParams& p = traj.config.params;
  const double target = traj.config.mode == RunMode::Discrete ? limits::tau_disc(std::floor(t), p.alpha, p.c)
                                                              : limits::tau(t, p.zeta());
  return (traj.capacity_at(t) - target) / std::sqrt(p.c);
}

double shape_error(const conformal::ClusterMap& phi, double radius, std::size_t samples) {
  double worst = 0.0;
  for (const auto& r : conformal::sample_schlicht_residual(phi, radius, samples)) worst = std::max(worst, std::abs(r));
  return worst;
}

PoissonIntegral poisson_integral_modes(std::span<const chain::EventRecord> events, double t,
                                       const ModelParams& params, int k_modes) {
  if (k_modes < 0) throw ConfigError("k_modes must be nonnegative");
  const double zeta = params.zeta();
  const double tau_t = limits::tau(t, zeta);
  std::vector<double> rate(static_cast<std::size_t>(k_modes) + 1);
  for (int k = 0; k <= k_modes; ++k) rate[k] = 1.0 + limits::multiplier_q(k, zeta, params.sigma);

  PoissonIntegral out;
  out.modes.assign(rate.size(), cplx{});
  double cap_sum = 0.0;
  for (const auto& e : events) {
    if (e.s > t) break;
    if (!e.pi_accepted) continue;
    const double tau_s = limits::tau(e.s, zeta);
    const double lag = tau_t - tau_s;
    const double c_s = params.c * std::exp(-params.alpha * tau_s);
    cap_sum += std::exp(-zeta * lag) * c_s;
    for (std::size_t k = 0; k < rate.size(); ++k) {
      out.modes[k] += 2.0 * c_s * std::exp(-rate[k] * lag) * std::polar(1.0, static_cast<double>(k + 1) * e.theta);
    }
  }
  const double scale = 1.0 / std::sqrt(params.c);
  for (auto& m : out.modes) m *= scale;
  out.cap = (cap_sum - t * std::exp(-zeta * tau_t)) * scale;
  return out;
}

PoissonIntegral poisson_integral_modes(const chain::Trajectory& traj, double t) {
  if (!traj.events_retained) throw FeatureUnavailable("Poisson integrals need the event log with v-marks");
  if (traj.config.mode != RunMode::Continuous) {
    throw FeatureUnavailable("Poisson integrals are defined for continuous-time runs");
  }
  return poisson_integral_modes(traj.events, t, traj.config.params, traj.config.k_modes);
}

conformal::ClusterMap cluster_from_events(std::span<const chain::EventRecord> events, double t) {
  conformal::ClusterMap phi;
  for (const auto& e : events) {
    if (e.s > t) break;
    if (e.chain_accepted) phi.append(conformal::build_slit_map(e.c_event, e.theta));
  }
  return phi;
}

FluctSample fluct_sample(const chain::Trajectory& traj, double t, int replica_id) {
  const SimConfig& cfg = traj.config;
  FluctSample s;
  s.replica_id = replica_id;
  s.t = t;
  s.radius = cfg.fluct_radius;
  const conformal::LaurentGrid grid{cfg.fluct_radius, static_cast<std::size_t>(cfg.k_modes),
                                    static_cast<std::size_t>(cfg.grid_m)};
  s.modes = fluct_modes(traj.cluster_at(t), cfg.params, grid);
  s.cap = cap_fluct(traj, t);
  if (traj.events_retained && cfg.mode == RunMode::Continuous) {
    auto pi = poisson_integral_modes(traj, t);
    s.pi_modes = std::move(pi.modes);
    s.pi_cap = pi.cap;
    s.has_pi = true;
  }
  return s;
}

}  // namespace ale::analysis
