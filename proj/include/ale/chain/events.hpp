#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ale/conformal/cluster.hpp"
#include "ale/sim_config.hpp"

namespace ale::chain {

/// One atom (s, theta, v) of the driving Poisson random measure together with the
/// acceptance decisions it produced. deriv_mag is NaN when the dynamics never needed
/// |Phi'| (alpha = eta = 0).
struct EventRecord {
  double s = 0.0;
  double theta = 0.0;
  double v = 0.0;
  double c_event = 0.0;
  double deriv_mag = std::numeric_limits<double>::quiet_NaN();
  bool chain_accepted = false;
  bool pi_accepted = false;

  bool operator==(const EventRecord&) const = default;
};

/// State summary at a fixed time. The cluster is the prefix of the trajectory's final
/// cluster with n_particles particles.
struct Snapshot {
  double t = 0.0;
  std::size_t n_particles = 0;
  double cap = 0.0;
  /// Running sup over [0, t] of |T_s - tau_s| (tau^disc_n in discrete mode).
  double sup_cap_err = 0.0;
};

struct RunSummary {
  std::uint64_t proposals = 0;
  std::uint64_t chain_accepted = 0;
  std::uint64_t pi_accepted = 0;
  std::uint64_t envelope_violations = 0;
  std::uint64_t envelope_scans = 0;
  bool aborted = false;
  std::string abort_reason;
  double sup_cap_err = 0.0;
};

struct Trajectory {
  SimConfig config;
  std::uint64_t seed = 0;
  conformal::ClusterMap cluster;
  std::vector<Snapshot> snapshots;
  std::vector<EventRecord> events;
  bool events_retained = false;
  /// Discrete mode only: T^disc_n for n = 0..N.
  std::vector<double> disc_capacity;
  RunSummary summary;

  /// Final time (T) or final step (N).
  double final_time() const;
  /// Number of particles present at time t (uses the event log, or an exactly matching snapshot).
  std::size_t particles_at(double t) const;
  conformal::ClusterMap cluster_at(double t) const { return cluster.prefix(particles_at(t)); }
  /// Cluster capacity T_t.
  double capacity_at(double t) const;
};

}  // namespace ale::chain
