#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "ale/chain/events.hpp"
#include "ale/conformal/laurent.hpp"
#include "ale/params.hpp"

namespace ale::analysis {

using cplx = std::complex<double>;

/// c^{-1/2} times the Laurent coefficients 0..K of Psi-hat(z) = e^{-T} Phi(z) - z on |z| = r.
/// The disk solution is z itself after normalization, so this is the rescaled shape fluctuation.
std::vector<cplx> fluct_modes(const conformal::ClusterMap& phi, const ModelParams& params,
                              const conformal::LaurentGrid& grid = {});

/// c^{-1/2} (T_t - tau_t). In discrete mode t is the step n and tau^disc_n replaces tau_t.
double cap_fluct(const chain::Trajectory& traj, double t);

/// max over the M-point grid on |z| = r of |Phi-hat(z) - z|.
double shape_error(const conformal::ClusterMap& phi, double radius, std::size_t samples);

/// Poisson integrals built from the same marks as the chain (pi-accepted atoms only):
///   Pi_t(k)   = 2 sum_{s <= t} e^{-(1 + q(k))(tau_t - tau_s)} e^{i(k+1) theta_s} c_s,
///   Pi^cap_t  = sum_{s <= t} e^{-zeta (tau_t - tau_s)} c_s - t/(1 + zeta t),
/// with c_s = c e^{-alpha tau_s}; both multiplied by c^{-1/2}.
struct PoissonIntegral {
  std::vector<cplx> modes;
  double cap = 0.0;
};

/// Throws FeatureUnavailable when the event log (v-marks) was not retained.
PoissonIntegral poisson_integral_modes(std::span<const chain::EventRecord> events, double t,
                                       const ModelParams& params, int k_modes);
PoissonIntegral poisson_integral_modes(const chain::Trajectory& traj, double t);

/// Rebuilds the cluster from chain-accepted events up to time t.
conformal::ClusterMap cluster_from_events(std::span<const chain::EventRecord> events, double t);

/// Rescaled fluctuation data of one replica at one time.
struct FluctSample {
  int replica_id = 0;
  double t = 0.0;
  double radius = 1.5;
  std::vector<cplx> modes;
  double cap = 0.0;
  /// Empty when the replica kept no event log.
  std::vector<cplx> pi_modes;
  double pi_cap = 0.0;
  bool has_pi = false;
};

/// Extracts modes and cap at time t using the trajectory's configured K, r and M.
FluctSample fluct_sample(const chain::Trajectory& traj, double t, int replica_id);

}  // namespace ale::analysis
