#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ale/analysis/fluct.hpp"
#include "ale/analysis/stats.hpp"
#include "ale/chain/events.hpp"
#include "ale/sim_config.hpp"

namespace ale::harness {

namespace fs = std::filesystem;

/// Version string stamped into manifests.
inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kFormatVersion = 1;

struct ReplicaStatus {
  int index = 0;
  std::uint64_t seed = 0;
  /// "ok" (ran now), "resumed" (found complete on disk) or "failed".
  std::string status;
  std::string error;
  chain::RunSummary summary;
  std::size_t n_particles = 0;
  bool complete() const { return status != "failed"; }
};

struct BatchResult {
  std::string config_hash;
  std::vector<ReplicaStatus> replicas;
  std::uint64_t envelope_violations = 0;
  std::size_t failed() const;
};

/// Writes the replica directory (events.jsonl, snapshots.csv, fluct.csv, then replica.json
/// last as the completion marker).
void write_replica(const chain::Trajectory& traj, int index, const fs::path& dir, const std::string& config_hash);

/// Runs every replica of `cfg` into `out`:
///   out/config.json, out/manifest.json, out/replica_NNNN/...
/// Replicas whose replica.json already carries the same config hash are kept (resume).
/// A replica that throws is recorded as failed and the batch continues. Throws ConfigError
/// when `out` holds a run with a different config hash.
BatchResult run_batch(const SimConfig& cfg, const fs::path& out, unsigned parallelism = 1);

/// Replica directory name, e.g. replica_0007.
std::string replica_dir_name(int index);

struct LoadedRuns {
  SimConfig config;
  std::string config_hash;
  std::vector<analysis::FluctSample> samples;
  std::vector<std::string> hashes;  // per sample
};

/// Reads config.json and every completed replica's fluct.csv. Throws ConfigError when the
/// replicas carry different config hashes, unless force is set.
LoadedRuns load_runs(const fs::path& dir, bool force = false);
analysis::FluctSample read_fluct_csv(const fs::path& path, int replica_id);

/// Oracle variances matching a config: the sigma-regularized mode variance for the
/// continuous chain and the particle-count-time variance in discrete mode.
analysis::OracleVariances oracle_for(const SimConfig& cfg, double t);

}  // namespace ale::harness
