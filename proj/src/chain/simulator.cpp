#include "ale/chain/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ale/conformal/particle.hpp"
#include "ale/errors.hpp"
#include "ale/limits/time_change.hpp"

namespace ale::chain {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Largest change of tau over one thinning window when eta != 0.
constexpr double kWindowTau = 0.01;

double exponential(Philox4x32& rng, double rate) { return -std::log1p(-uniform01(rng)) / rate; }

}  // namespace

// ---------------------------------------------------------------------------
// Trajectory accessors

double Trajectory::final_time() const {
  return config.mode == RunMode::Continuous ? config.horizon : static_cast<double>(config.steps);
}

std::size_t Trajectory::particles_at(double t) const {
  if (events_retained) {
    std::size_t n = 0;
    for (const auto& e : events) {
      if (e.s > t) break;
      if (e.chain_accepted) ++n;
    }
    return n;
  }
  for (const auto& snap : snapshots) {
    if (snap.t == t) return snap.n_particles;
  }
  throw FeatureUnavailable("cluster at t = " + std::to_string(t) + " needs the event log or a matching snapshot");
}

double Trajectory::capacity_at(double t) const {
  if (config.mode == RunMode::Discrete) {
    const auto n = static_cast<std::size_t>(std::floor(t));
    if (n >= disc_capacity.size()) throw DomainError("capacity_at beyond final step");
    return disc_capacity[n];
  }
  for (const auto& snap : snapshots) {
    if (snap.t == t) return snap.cap;
  }
  if (!events_retained) throw FeatureUnavailable("capacity at an off-snapshot time needs the event log");
  double sum = 0.0;
  for (const auto& e : events) {
    if (e.s > t) break;
    if (e.chain_accepted) sum += e.c_event;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Continuous-time chain

ContinuousChain::ContinuousChain(const ModelParams& params, std::uint64_t seed, double envelope_margin,
                                 double envelope_refresh)
    : params_(params), rng_(seed), margin_(envelope_margin), refresh_(envelope_refresh) {
  if (!(params_.c > 0.0)) throw ConfigError("capacity parameter c must be positive");
  if (!(params_.sigma > 0.0)) throw ConfigError("regularization sigma must be positive");
  if (params_.eta != 0.0) refresh_envelope();
}

double ContinuousChain::disk_rate(double t) const {
  return std::exp(-params_.eta * limits::tau(t, params_.zeta())) / params_.c;
}

double ContinuousChain::chain_bound() const {
  const double eta = params_.eta;
  if (eta == 0.0) return 1.0 / params_.c;
  const double shape = eta > 0.0 ? std::pow(envelope_.lower, -eta) : std::pow(envelope_.upper, -eta);
  return inflation_ * std::exp(-eta * cluster_.total_capacity()) * shape / params_.c;
}

void ContinuousChain::refresh_envelope() {
  envelope_ = derivative_envelope(cluster_, params_, margin_);
  inflation_ = 1.0;
  scanned_at_ = cluster_.size();
  ++summary_.envelope_scans;
}

void ContinuousChain::track_error(double t) {
  const double err = std::abs(cluster_.total_capacity() - limits::tau(t, params_.zeta()));
  summary_.sup_cap_err = std::max(summary_.sup_cap_err, err);
}

std::optional<EventRecord> ContinuousChain::next_event(double until) {
  const double zeta = params_.zeta();
  const double t_crit = limits::t_crit(zeta);
  const bool needs_deriv = params_.alpha != 0.0 || params_.eta != 0.0;

  while (time_ < until) {
    double window_end = until;
    if (params_.eta != 0.0) {
      // Keep lambda_s within ~1% of its endpoint values across the window.
      const double stretch = std::max(1.0 + zeta * time_, 0.0);
      double h = kWindowTau * stretch / std::abs(params_.eta);
      if (std::isfinite(t_crit)) h = std::min(h, 0.5 * (t_crit - time_));
      window_end = std::min(until, time_ + h);
    }
    const double rate_cap =
        std::max({chain_bound(), disk_rate(time_), disk_rate(window_end)});

    const double wait = exponential(rng_, rate_cap);
    if (time_ + wait >= window_end) {
      time_ = window_end;
      continue;
    }
    const double s = time_ + wait;
    EventRecord ev;
    ev.s = s;
    ev.theta = kTwoPi * uniform01(rng_);
    ev.v = rate_cap * uniform01(rng_);

    double log_deriv = 0.0;
    if (needs_deriv) {
      log_deriv = log_deriv_at_angle(cluster_, params_.sigma, ev.theta);
      ev.deriv_mag = std::exp(log_deriv);
    }
    const double chain_rate = std::exp(-params_.eta * log_deriv) / params_.c;
    if (chain_rate > rate_cap) {
      // Envelope too tight: widen and re-propose from s (the clock is memoryless).
      ++summary_.envelope_violations;
      inflation_ *= 2.0;
      time_ = s;
      continue;
    }

    time_ = s;
    ++summary_.proposals;
    ev.chain_accepted = ev.v <= chain_rate;
    ev.pi_accepted = ev.v <= disk_rate(s);
    if (ev.pi_accepted) ++summary_.pi_accepted;
    if (ev.chain_accepted) {
      ev.c_event = params_.c * std::exp(-params_.alpha * log_deriv);
      track_error(s);
      cluster_.append(conformal::build_slit_map(ev.c_event, ev.theta));
      track_error(s);
      ++summary_.chain_accepted;
      if (params_.eta != 0.0 && !envelope_.analytic) {
        const auto grown = static_cast<std::size_t>(std::ceil(refresh_ * static_cast<double>(scanned_at_)));
        if (cluster_.size() >= scanned_at_ + std::max<std::size_t>(1, grown)) refresh_envelope();
      }
    }
    return ev;
  }
  time_ = until;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Runs

namespace {

std::vector<double> snapshot_times(double horizon, int count) {
  std::vector<double> out;
  const int n = std::max(count, 1);
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j < n; ++j) out.push_back(horizon * static_cast<double>(j) / static_cast<double>(n));
  out.push_back(horizon);
  return out;
}

}  // namespace

Trajectory run(const SimConfig& config, std::uint64_t seed) {
  const ModelParams& params = config.params;
  const double zeta = params.zeta();
  if (!(config.horizon >= 0.0)) throw ConfigError("horizon T must be nonnegative");
  if (!(config.horizon < limits::t_crit(zeta))) {
    throw ConfigError("horizon T = " + std::to_string(config.horizon) + " must be below t_zeta = " +
                      std::to_string(limits::t_crit(zeta)) + " (explosion guard)");
  }

  Trajectory traj;
  traj.config = config;
  traj.seed = seed;
  traj.events_retained = config.keep_events;

  ContinuousChain chain(params, seed, config.envelope_margin, config.envelope_refresh);
  std::uint64_t proposals = 0;
  bool aborted = false;
  for (double t_snap : snapshot_times(config.horizon, config.snapshot_count)) {
    while (!aborted) {
      auto ev = chain.next_event(t_snap);
      if (!ev) break;
      if (config.keep_events) traj.events.push_back(*ev);
      if (++proposals >= config.max_events) aborted = true;
    }
    if (aborted) break;
    const double err = std::abs(chain.capacity() - limits::tau(t_snap, zeta));
    traj.snapshots.push_back({t_snap, chain.cluster().size(), chain.capacity(), std::max(chain.sup_cap_err(), err)});
  }

  traj.summary = chain.summary();
  if (!traj.snapshots.empty()) traj.summary.sup_cap_err = traj.snapshots.back().sup_cap_err;
  if (aborted) {
    traj.summary.aborted = true;
    traj.summary.abort_reason = "event cap of " + std::to_string(config.max_events) + " reached at t = " +
                                std::to_string(chain.time());
  }
  traj.cluster = chain.take_cluster();
  return traj;
}

Trajectory run_discrete(const SimConfig& config, std::uint64_t seed) {
  const ModelParams& params = config.params;
  const double c = params.c;
  if (config.steps < 0) throw ConfigError("step count N must be nonnegative");
  const auto steps = static_cast<double>(config.steps);
  if (!(steps < limits::n_crit(params.alpha) / c)) {
    throw ConfigError("step count N = " + std::to_string(config.steps) + " must be below n_alpha/c = " +
                      std::to_string(limits::n_crit(params.alpha) / c));
  }
  if (!(params.sigma > 0.0)) throw ConfigError("regularization sigma must be positive");

  Trajectory traj;
  traj.config = config;
  traj.seed = seed;
  traj.events_retained = config.keep_events;
  traj.disc_capacity.reserve(static_cast<std::size_t>(config.steps) + 1);
  traj.disc_capacity.push_back(0.0);

  Philox4x32 rng(seed);
  conformal::ClusterMap cluster;
  RunSummary& summary = traj.summary;
  const bool needs_deriv = params.alpha != 0.0 || params.eta != 0.0;

  Envelope env;
  std::size_t scanned_at = 0;
  double inflation = 1.0;
  auto rescan = [&] {
    env = derivative_envelope(cluster, params, config.envelope_margin);
    scanned_at = cluster.size();
    inflation = 1.0;
    ++summary.envelope_scans;
  };
  if (params.eta != 0.0) rescan();

  const int snaps = std::max(config.snapshot_count, 1);
  std::size_t next_snap = 0;
  auto snapshot_step = [&](std::size_t j) {
    return static_cast<std::int64_t>(std::llround(steps * static_cast<double>(j) / static_cast<double>(snaps)));
  };
  auto emit_snapshots = [&](std::int64_t n) {
    while (next_snap <= static_cast<std::size_t>(snaps) && snapshot_step(next_snap) <= n) {
      traj.snapshots.push_back({static_cast<double>(snapshot_step(next_snap)), cluster.size(),
                                cluster.total_capacity(), summary.sup_cap_err});
      ++next_snap;
    }
  };
  emit_snapshots(0);

  for (std::int64_t n = 1; n <= config.steps; ++n) {
    const double cap = cluster.total_capacity();
    // Unnormalized angle density |Phi-hat'|^{-eta}; its bound from the envelope.
    double bound = 1.0;
    if (params.eta > 0.0) bound = std::pow(env.lower, -params.eta);
    if (params.eta < 0.0) bound = std::pow(env.upper, -params.eta);
    const double rate_scale = std::exp(-params.eta * cap) / c;

    while (true) {
      if (summary.proposals >= config.max_events) {
        summary.aborted = true;
        summary.abort_reason = "event cap of " + std::to_string(config.max_events) + " reached at step " +
                               std::to_string(n);
        break;
      }
      EventRecord ev;
      ev.s = static_cast<double>(n);
      ev.theta = 2.0 * std::numbers::pi * uniform01(rng);
      const double u = uniform01(rng);
      double log_hat = 0.0;
      if (needs_deriv) {
        const double log_deriv = log_deriv_at_angle(cluster, params.sigma, ev.theta);
        ev.deriv_mag = std::exp(log_deriv);
        log_hat = log_deriv - cap;
      }
      const double density = std::exp(-params.eta * log_hat);
      const double envelope = inflation * bound;
      if (density > envelope) {
        ++summary.envelope_violations;
        inflation *= 2.0;
        continue;
      }
      ev.v = rate_scale * envelope * u;
      ev.chain_accepted = u * envelope <= density;
      ++summary.proposals;
      if (ev.chain_accepted) {
        ev.c_event = c * std::exp(-params.alpha * (cap + log_hat));
        cluster.append(conformal::build_slit_map(ev.c_event, ev.theta));
        ++summary.chain_accepted;
      }
      if (config.keep_events) traj.events.push_back(ev);
      if (ev.chain_accepted) break;
    }
    if (summary.aborted) break;

    traj.disc_capacity.push_back(cluster.total_capacity());
    const double target = limits::tau_disc(static_cast<double>(n), params.alpha, c);
    summary.sup_cap_err = std::max(summary.sup_cap_err, std::abs(cluster.total_capacity() - target));
    if (params.eta != 0.0 && !env.analytic) {
      const auto grown = static_cast<std::size_t>(std::ceil(config.envelope_refresh * static_cast<double>(scanned_at)));
      if (cluster.size() >= scanned_at + std::max<std::size_t>(1, grown)) rescan();
    }
    emit_snapshots(n);
  }
  traj.cluster = std::move(cluster);
  return traj;
}

}  // namespace ale::chain
