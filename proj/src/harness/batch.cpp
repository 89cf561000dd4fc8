#include "ale/harness/batch.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ale/chain/simulator.hpp"
#include "ale/errors.hpp"
#include "ale/harness/config.hpp"
#include "ale/limits/oracle.hpp"
#include "ale/parallel.hpp"
#include "ale/rng.hpp"

namespace ale::harness {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void close_checked(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return json::parse(in);
}

ordered_json summary_json(const chain::RunSummary& s) {
  ordered_json j;
  j["proposals"] = s.proposals;
  j["chain_accepted"] = s.chain_accepted;
  j["pi_accepted"] = s.pi_accepted;
  j["envelope_violations"] = s.envelope_violations;
  j["envelope_scans"] = s.envelope_scans;
  j["aborted"] = s.aborted;
  j["abort_reason"] = s.abort_reason;
  j["sup_cap_err"] = s.sup_cap_err;
  return j;
}

chain::RunSummary summary_from(const json& j) {
  chain::RunSummary s;
  s.proposals = j.at("proposals").get<std::uint64_t>();
  s.chain_accepted = j.at("chain_accepted").get<std::uint64_t>();
  s.pi_accepted = j.at("pi_accepted").get<std::uint64_t>();
  s.envelope_violations = j.at("envelope_violations").get<std::uint64_t>();
  s.envelope_scans = j.at("envelope_scans").get<std::uint64_t>();
  s.aborted = j.at("aborted").get<bool>();
  s.abort_reason = j.at("abort_reason").get<std::string>();
  s.sup_cap_err = j.at("sup_cap_err").get<double>();
  return s;
}

void write_fluct_csv(std::ostream& out, const analysis::FluctSample& s) {
  out << "t,kind,k,re,im\n";
  for (std::size_t k = 0; k < s.modes.size(); ++k) {
    out << num(s.t) << ",mode," << k << ',' << num(s.modes[k].real()) << ',' << num(s.modes[k].imag()) << '\n';
  }
  out << num(s.t) << ",cap,0," << num(s.cap) << ",0\n";
  if (s.has_pi) {
    for (std::size_t k = 0; k < s.pi_modes.size(); ++k) {
      out << num(s.t) << ",pi_mode," << k << ',' << num(s.pi_modes[k].real()) << ',' << num(s.pi_modes[k].imag())
          << '\n';
    }
    out << num(s.t) << ",pi_cap,0," << num(s.pi_cap) << ",0\n";
  }
}

// Complete when replica.json exists; returns its hash (empty when absent or unreadable).
std::string completed_hash(const fs::path& dir) {
  const fs::path marker = dir / "replica.json";
  if (!fs::exists(marker)) return {};
  try {
    return read_json(marker).at("config_hash").get<std::string>();
  } catch (const std::exception&) {
    return {};
  }
}

}  // namespace

std::size_t BatchResult::failed() const {
  std::size_t n = 0;
  for (const auto& r : replicas) n += r.complete() ? 0 : 1;
  return n;
}

std::string replica_dir_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "replica_%04d", index);
  return buf;
}

void write_replica(const chain::Trajectory& traj, int index, const fs::path& dir, const std::string& config_hash) {
  fs::create_directories(dir);
  fs::remove(dir / "replica.json");

  if (traj.events_retained) {
    const fs::path path = dir / "events.jsonl";
    auto out = open_out(path);
    for (const auto& e : traj.events) {
      ordered_json j;
      j["s"] = e.s;
      j["theta"] = e.theta;
      j["v"] = e.v;
      j["c_event"] = e.c_event;
      j["deriv_mag"] = std::isnan(e.deriv_mag) ? json(nullptr) : json(e.deriv_mag);
      j["chain_accepted"] = e.chain_accepted;
      j["pi_accepted"] = e.pi_accepted;
      out << j.dump() << '\n';
    }
    close_checked(out, path);
  }
  {
    const fs::path path = dir / "snapshots.csv";
    auto out = open_out(path);
    out << "t,cap,n_particles,sup_cap_err\n";
    for (const auto& s : traj.snapshots) {
      out << num(s.t) << ',' << num(s.cap) << ',' << s.n_particles << ',' << num(s.sup_cap_err) << '\n';
    }
    close_checked(out, path);
  }
  const double t_final = traj.final_time();
  {
    const fs::path path = dir / "fluct.csv";
    auto out = open_out(path);
    write_fluct_csv(out, analysis::fluct_sample(traj, t_final, index));
    close_checked(out, path);
  }
  ordered_json meta;
  meta["replica"] = index;
  meta["seed"] = traj.seed;
  meta["config_hash"] = config_hash;
  meta["t"] = t_final;
  meta["n_particles"] = traj.cluster.size();
  meta["capacity"] = traj.cluster.total_capacity();
  meta["events_retained"] = traj.events_retained;
  meta["summary"] = summary_json(traj.summary);
  // write-then-rename so a crash never leaves a half-written marker
  const fs::path tmp = dir / "replica.json.tmp";
  {
    auto out = open_out(tmp);
    out << meta.dump(2) << '\n';
    close_checked(out, tmp);
  }
  fs::rename(tmp, dir / "replica.json");
}

BatchResult run_batch(const SimConfig& cfg_in, const fs::path& out, unsigned parallelism) {
  SimConfig cfg = cfg_in;
  validate(cfg);
  const std::string hash = config_hash(cfg);

  fs::create_directories(out);
  const fs::path config_path = out / "config.json";
  if (fs::exists(config_path)) {
    const std::string existing = config_hash(load_config(config_path));
    if (existing != hash) {
      throw ConfigError("output directory " + out.string() + " holds a run with config hash " + existing +
                        ", this config hashes to " + hash);
    }
  }
  save_config(cfg, config_path);

  BatchResult result;
  result.config_hash = hash;
  result.replicas.resize(static_cast<std::size_t>(cfg.replicas));

  parallel_for(result.replicas.size(), parallelism, [&](std::size_t i) {
    auto& status = result.replicas[i];
    status.index = static_cast<int>(i);
    status.seed = stream_seed(cfg.master_seed, i);
    const fs::path dir = out / replica_dir_name(status.index);
    if (completed_hash(dir) == hash) {
      const json meta = read_json(dir / "replica.json");
      status.status = "resumed";
      status.summary = summary_from(meta.at("summary"));
      status.n_particles = meta.at("n_particles").get<std::size_t>();
      return;
    }
    try {
      const chain::Trajectory traj =
          cfg.mode == RunMode::Continuous ? chain::run(cfg, status.seed) : chain::run_discrete(cfg, status.seed);
      write_replica(traj, status.index, dir, hash);
      status.status = "ok";
      status.summary = traj.summary;
      status.n_particles = traj.cluster.size();
    } catch (const std::exception& e) {
      status.status = "failed";
      status.error = e.what();
    }
  });

  ordered_json manifest;
  manifest["format_version"] = kFormatVersion;
  manifest["version"] = kVersion;
  manifest["config_hash"] = hash;
  manifest["master_seed"] = cfg.master_seed;
  manifest["replica_count"] = cfg.replicas;
  ordered_json reps = ordered_json::array();
  for (const auto& r : result.replicas) {
    result.envelope_violations += r.summary.envelope_violations;
    ordered_json j;
    j["replica"] = r.index;
    j["dir"] = replica_dir_name(r.index);
    j["seed"] = r.seed;
    // resumed and fresh replicas are indistinguishable on disk, so the manifest does not
    // record which happened
    j["complete"] = r.complete();
    if (!r.complete()) j["error"] = r.error;
    j["n_particles"] = r.n_particles;
    j["envelope_violations"] = r.summary.envelope_violations;
    j["aborted"] = r.summary.aborted;
    reps.push_back(std::move(j));
  }
  manifest["envelope_violations"] = result.envelope_violations;
  manifest["failed"] = result.failed();
  manifest["replicas"] = std::move(reps);
  const fs::path manifest_path = out / "manifest.json";
  auto mout = open_out(manifest_path);
  mout << manifest.dump(2) << '\n';
  close_checked(mout, manifest_path);
  return result;
}

analysis::FluctSample read_fluct_csv(const fs::path& path, int replica_id) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "t,kind,k,re,im") throw std::runtime_error(path.string() + ": unexpected header '" + line + "'");
  analysis::FluctSample s;
  s.replica_id = replica_id;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string t, kind, k, re, im;
    if (!std::getline(row, t, ',') || !std::getline(row, kind, ',') || !std::getline(row, k, ',') ||
        !std::getline(row, re, ',') || !std::getline(row, im, ',')) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": malformed row");
    }
    s.t = std::stod(t);
    const std::complex<double> value(std::stod(re), std::stod(im));
    if (kind == "mode") {
      s.modes.push_back(value);
    } else if (kind == "cap") {
      s.cap = value.real();
    } else if (kind == "pi_mode") {
      s.pi_modes.push_back(value);
      s.has_pi = true;
    } else if (kind == "pi_cap") {
      s.pi_cap = value.real();
      s.has_pi = true;
    } else {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": unknown kind '" + kind + "'");
    }
  }
  return s;
}

LoadedRuns load_runs(const fs::path& dir, bool force) {
  LoadedRuns runs;
  runs.config = load_config(dir / "config.json");
  runs.config_hash = config_hash(runs.config);
  std::vector<fs::path> replica_dirs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory() && entry.path().filename().string().rfind("replica_", 0) == 0) {
      replica_dirs.push_back(entry.path());
    }
  }
  std::sort(replica_dirs.begin(), replica_dirs.end());
  for (const auto& rd : replica_dirs) {
    if (!fs::exists(rd / "replica.json")) continue;  // incomplete
    const json meta = read_json(rd / "replica.json");
    const std::string h = meta.at("config_hash").get<std::string>();
    if (h != runs.config_hash && !force) {
      throw ConfigError("replica " + rd.filename().string() + " has config hash " + h + " but the run directory has " +
                        runs.config_hash + " (use --force to analyze anyway)");
    }
    runs.samples.push_back(read_fluct_csv(rd / "fluct.csv", meta.at("replica").get<int>()));
    runs.hashes.push_back(h);
  }
  return runs;
}

analysis::OracleVariances oracle_for(const SimConfig& cfg, double t) {
  analysis::OracleVariances o;
  const ModelParams p = cfg.params;
  if (cfg.mode == RunMode::Continuous) {
    o.mode = [p, t](int k) { return limits::poisson_mode_variance(k, t, p); };
    o.pi_mode = o.mode;
    o.cap = limits::ou_covariance(0, t, p, limits::OuFlavor::Cap);
    o.pi_cap = o.cap;
  } else {
    const double nu = p.c * t;
    o.mode = [p, nu](int k) { return limits::ou_covariance(k, nu, p, limits::OuFlavor::Disc); };
  }
  return o;
}

}  // namespace ale::harness
