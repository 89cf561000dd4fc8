#pragma once

#include <cstdint>
#include <optional>

#include "ale/chain/events.hpp"
#include "ale/chain/rates.hpp"
#include "ale/rng.hpp"
#include "ale/sim_config.hpp"

namespace ale::chain {

/// Continuous-time ALE(alpha, eta) chain realized by thinning a Poisson random measure of
/// intensity (2 pi)^{-1} d theta dv dt restricted to v <= V, where V dominates both the
/// chain rate Lambda_s(theta) and the disk-solution rate lambda_s = c^{-1} e^{-eta tau_s}
/// over the current time window.
class ContinuousChain {
 public:
  ContinuousChain(const ModelParams& params, std::uint64_t seed, double envelope_margin = 2.0,
                  double envelope_refresh = 0.125);

  /// Advances to the next proposal before `until`. Returns nullopt (with time() == until)
  /// when none occurs. On chain acceptance the particle is appended before returning.
  std::optional<EventRecord> next_event(double until);

  double time() const { return time_; }
  double capacity() const { return cluster_.total_capacity(); }
  const conformal::ClusterMap& cluster() const { return cluster_; }
  conformal::ClusterMap take_cluster() { return std::move(cluster_); }
  const Envelope& envelope() const { return envelope_; }
  const RunSummary& summary() const { return summary_; }
  /// Running sup of |T_s - tau_s| over [0, time()].
  double sup_cap_err() const { return summary_.sup_cap_err; }

 private:
  double disk_rate(double t) const;
  double chain_bound() const;
  void refresh_envelope();
  void track_error(double t);

  ModelParams params_;
  Philox4x32 rng_;
  double margin_;
  double refresh_;
  conformal::ClusterMap cluster_;
  Envelope envelope_;
  double inflation_ = 1.0;
  std::size_t scanned_at_ = 0;
  double time_ = 0.0;
  RunSummary summary_;
};

/// One continuous-time trajectory. Deterministic in (config, seed).
/// Throws ConfigError when zeta < 0 and horizon >= t_zeta.
Trajectory run(const SimConfig& config, std::uint64_t seed);

/// Discrete-time skeleton: N steps, angles drawn from the density proportional to
/// |Phi'(e^{sigma + i theta})|^{-eta} by envelope rejection.
/// Throws ConfigError when alpha < 0 and N >= n_alpha/c.
Trajectory run_discrete(const SimConfig& config, std::uint64_t seed);

}  // namespace ale::chain
