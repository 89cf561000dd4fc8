// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are fixed below.
// Usage: acceptance [criterion numbers...]   (default: all)
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ale/analysis/fluct.hpp"
#include "ale/analysis/stats.hpp"
#include "ale/analysis/sweep.hpp"
#include "ale/chain/simulator.hpp"
#include "ale/conformal/cluster.hpp"
#include "ale/conformal/laurent.hpp"
#include "ale/conformal/particle.hpp"
#include "ale/limits/multiplier.hpp"
#include "ale/limits/oracle.hpp"
#include "ale/limits/time_change.hpp"
#include "ale/parallel.hpp"
#include "ale/rng.hpp"

using namespace ale;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

// Criterion 1
constexpr double kCapacityTol = 1e-10;
constexpr double kA0RatioTol = 0.1;
// Criterion 2: the bound 1/(r^2 - 1) is used as is, no slack.
// Criterion 3
constexpr double kMeanSigmas = 3.0;
constexpr double kBaselineVarBand = 0.20;
// Criterion 4
constexpr double kBulkErrTol = 0.05;
constexpr int kBulkRuns = 20;
constexpr int kBulkRequired = 18;
// Criterion 5
constexpr double kSlopeLo = 0.35;
constexpr double kSlopeHi = 0.65;
// Criterion 6
constexpr int kFluctReplicas = 400;
constexpr double kFluctBandZeta0 = 0.20;
constexpr double kFluctBandQuad = 0.25;
// Criterion 7
constexpr double kCouplingFraction = 0.2;
// Criterion 8
constexpr double kAnchorTol = 1e-9;
constexpr std::size_t kOraclePaths = 2000;
constexpr double kOracleSigmas = 3.0;
// Criterion 9
constexpr double kDiscTol = 0.02;
constexpr double kDiscIdentityTol = 1e-9;
constexpr std::int64_t kDiscSteps = 5000;

unsigned workers() { return std::max(1U, std::thread::hardware_concurrency()); }

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok) { pass = pass && ok; }
};

SimConfig continuous(double alpha, double eta, double c, double horizon = 1.0) {
  SimConfig cfg;
  cfg.params = {alpha, eta, std::pow(c, 0.2), c};
  cfg.sigma_rule = {SigmaRule::Kind::Exponent, 0.2};
  cfg.horizon = horizon;
  cfg.snapshot_count = 8;
  cfg.k_modes = 8;
  cfg.grid_m = 512;
  cfg.fluct_radius = 1.5;
  return cfg;
}

// ---------------------------------------------------------------------------------------

Verdict slit_map() {
  Verdict v;
  std::vector<double> ratio_err;
  for (double c : {1e-2, 1e-3, 1e-4}) {
    const auto p = conformal::build_slit_map(c, 0.0);
    // F(z)/z = F'(inf) + a_0/z + ..., so its circle mean is F'(inf)
    constexpr int m = 4096;
    cplx mean = 0.0;
    for (int j = 0; j < m; ++j) {
      const cplx z = std::polar(4.0, 2.0 * kPi * j / m);
      mean += p.eval(z) / z;
    }
    mean /= static_cast<double>(m);
    const double cap_err = std::abs(std::log(std::abs(mean)) - c);

    conformal::ClusterMap phi;
    phi.append(p);
    const double a0 = conformal::laurent_coeffs(phi, 1.5, 8, 256).coeffs[0].real();
    const double err = std::abs(a0 / (2.0 * c) - 1.0);
    ratio_err.push_back(err);
    v.require(cap_err <= kCapacityTol);
    v.detail << "c=" << c << ": |logF'(inf)-c|=" << cap_err << " |a0/2c-1|=" << err << "; ";
  }
  v.require(ratio_err.back() <= kA0RatioTol);
  v.require(ratio_err[0] > ratio_err[1] && ratio_err[1] > ratio_err[2]);
  return v;
}

Verdict distortion() {
  Verdict v;
  chain::ContinuousChain ch({1.0, 0.0, std::pow(1e-3, 0.2), 1e-3}, stream_seed(2002, 0));
  while (ch.cluster().size() < 1000) {
    if (ch.time() > 5.0) break;
    ch.next_event(5.0);
  }
  const auto& phi = ch.cluster();
  v.detail << "n=" << phi.size() << "; ";
  v.require(phi.size() == 1000);
  for (double r : {1.1, 1.3, 2.0}) {
    const double bound = 1.0 / (r * r - 1.0);
    double worst = 0.0;
    for (int j = 0; j < 256; ++j) {
      const cplx z = std::polar(r, 2.0 * kPi * j / 256.0);
      worst = std::max(worst, std::abs(phi.schlicht_deriv(z) - 1.0));
    }
    v.require(worst <= bound);
    v.detail << "r=" << r << ": max=" << worst << " bound=" << bound << "; ";
  }
  return v;
}

Verdict poisson_baseline() {
  Verdict v;
  auto cfg = continuous(0.0, 0.0, 1e-2);
  cfg.keep_events = false;
  const std::size_t n = 500;
  std::vector<double> cap(n), fluct(n);
  parallel_for(n, workers(), [&](std::size_t i) {
    const auto traj = chain::run(cfg, stream_seed(3003, i));
    cap[i] = traj.cluster.total_capacity();
    fluct[i] = (cap[i] - 1.0) / std::sqrt(cfg.params.c);
  });
  const auto mc = analysis::sample_moments(cap);
  const double se = std::sqrt(mc.var / static_cast<double>(n));
  const double z = (mc.mean.real() - 1.0) / se;
  const auto mf = analysis::sample_moments(fluct);
  const double rel = mf.var - 1.0;
  v.require(std::abs(z) <= kMeanSigmas);
  v.require(std::abs(rel) <= kBaselineVarBand);
  v.detail << "E T_1=" << mc.mean.real() << " (z=" << z << ") Var=" << mf.var << " (rel " << rel << ")";
  return v;
}

struct BulkRun {
  double cap_err = 0.0;
  double shape_err = 0.0;
  bool violated = false;
  std::vector<double> coupling;  // c^{-1/2}|Psi_T(k) - Pi_T(k)|, k = 0..4
};

std::vector<BulkRun> bulk_runs(double alpha, double eta, double c, bool coupling, std::uint64_t master) {
  auto cfg = continuous(alpha, eta, c);
  cfg.keep_events = coupling;
  cfg.k_modes = 4;
  std::vector<BulkRun> out(kBulkRuns);
  parallel_for(out.size(), workers(), [&](std::size_t i) {
    const auto traj = chain::run(cfg, stream_seed(master, i));
    auto& r = out[i];
    r.cap_err = traj.summary.sup_cap_err;
    r.shape_err = analysis::shape_error(traj.cluster, 1.5, 512);
    r.violated = traj.summary.envelope_violations > 0 || traj.summary.aborted;
    if (coupling) {
      const auto s = analysis::fluct_sample(traj, 1.0, static_cast<int>(i));
      for (int k = 0; k <= 4; ++k) r.coupling.push_back(std::abs(s.modes[k] - s.pi_modes[k]));
    }
  });
  return out;
}

std::vector<BulkRun> g_hl1_fine, g_hl1_coarse;  // reused by criterion 7

Verdict bulk() {
  Verdict v;
  for (auto [alpha, eta] : {std::pair{1.0, 0.0}, std::pair{2.0, -1.0}}) {
    const bool hl1 = alpha == 1.0;
    auto fine = bulk_runs(alpha, eta, 1e-4, hl1, 4004);
    auto coarse = bulk_runs(alpha, eta, 1e-3, hl1, 4003);
    int good = 0, violated = 0;
    for (const auto& r : fine) {
      violated += r.violated ? 1 : 0;
      if (!r.violated && r.cap_err <= kBulkErrTol && r.shape_err <= kBulkErrTol) ++good;
    }
    auto med = [](const std::vector<BulkRun>& runs, double BulkRun::*field) {
      std::vector<double> x;
      for (const auto& r : runs) x.push_back(r.*field);
      return analysis::median(x);
    };
    const double cap_fine = med(fine, &BulkRun::cap_err), cap_coarse = med(coarse, &BulkRun::cap_err);
    const double shape_fine = med(fine, &BulkRun::shape_err), shape_coarse = med(coarse, &BulkRun::shape_err);
    v.require(good >= kBulkRequired);
    v.require(cap_fine < cap_coarse && shape_fine < shape_coarse);
    v.detail << "(" << alpha << "," << eta << "): " << good << "/" << kBulkRuns << " within " << kBulkErrTol
             << " (violations " << violated << "), median cap " << cap_coarse << "->" << cap_fine << ", shape "
             << shape_coarse << "->" << shape_fine << "; ";
    if (hl1) {
      g_hl1_fine = std::move(fine);
      g_hl1_coarse = std::move(coarse);
    }
  }
  return v;
}

Verdict convergence_rate() {
  Verdict v;
  auto cfg = continuous(0.0, 0.0, 1e-2);
  cfg.master_seed = 5005;
  const std::vector<double> cs{1e-2, 1e-3, 1e-4};
  const auto table = analysis::convergence_sweep(cfg, cs, 20, workers());
  const double slope = table.slopes.at(analysis::kCapError);
  v.require(slope >= kSlopeLo && slope <= kSlopeHi);
  v.detail << "slope=" << slope << " medians";
  for (const auto* row : table.metric_rows(analysis::kCapError)) v.detail << " " << row->median;
  v.detail << " (shape slope " << table.slopes.at(analysis::kShapeError) << ")";
  return v;
}

std::vector<analysis::FluctSample> fluct_batch(double alpha, double eta, std::uint64_t master) {
  auto cfg = continuous(alpha, eta, 1e-3);
  cfg.keep_events = false;
  std::vector<analysis::FluctSample> out(kFluctReplicas);
  parallel_for(out.size(), workers(), [&](std::size_t i) {
    const auto traj = chain::run(cfg, stream_seed(master, i));
    out[i] = analysis::fluct_sample(traj, 1.0, static_cast<int>(i));
  });
  return out;
}

void fluct_rows(Verdict& v, const analysis::StatReport& rep) {
  for (int k = 0; k <= 4; ++k) {
    const auto* row = rep.find("mode", k);
    v.require(row != nullptr && row->pass());
    if (row) v.detail << " k" << k << ":" << row->rel_err << (row->pass() ? "" : "(fail)");
  }
}

Verdict fluctuations() {
  Verdict v;
  {
    const auto samples = fluct_batch(0.0, 0.0, 6006);
    analysis::OracleVariances oracle;
    oracle.mode = [](int k) { return 2.0 / (1.0 + k) * (1.0 - std::exp(-2.0 * (1.0 + k))); };
    analysis::StatThresholds thr;
    thr.var_band = kFluctBandZeta0;
    thr.mean_sigmas = kMeanSigmas;
    const auto rep = analysis::replica_stats(samples, oracle, thr);
    v.detail << "(0,0) rel err";
    fluct_rows(v, rep);
    v.detail << "; ";
  }
  {
    const ModelParams p{0.5, 0.25, std::pow(1e-3, 0.2), 1e-3};
    const auto samples = fluct_batch(p.alpha, p.eta, 6007);
    analysis::OracleVariances oracle;
    oracle.mode = [&](int k) { return limits::poisson_mode_variance(k, 1.0, p); };
    analysis::StatThresholds thr;
    thr.var_band = kFluctBandQuad;
    thr.mean_sigmas = kMeanSigmas;
    const auto rep = analysis::replica_stats(samples, oracle, thr);
    v.detail << "(0.5,0.25) rel err vs sigma-regularized quadrature";
    fluct_rows(v, rep);
    v.detail << "; sigma-free quadrature for reference:";
    for (int k = 0; k <= 4; ++k) {
      const double ref = limits::ou_covariance(k, 1.0, p, limits::OuFlavor::Mode);
      v.detail << " k" << k << ":" << rep.find("mode", k)->m.var / ref - 1.0;
    }
  }
  return v;
}

Verdict coupling() {
  Verdict v;
  if (g_hl1_fine.empty()) {
    g_hl1_fine = bulk_runs(1.0, 0.0, 1e-4, true, 4004);
    g_hl1_coarse = bulk_runs(1.0, 0.0, 1e-3, true, 4003);
  }
  const ModelParams p{1.0, 0.0, 0.0, 1e-4};
  for (int k = 0; k <= 4; ++k) {
    std::vector<double> fine, coarse;
    for (const auto& r : g_hl1_fine) fine.push_back(r.coupling[k]);
    for (const auto& r : g_hl1_coarse) coarse.push_back(r.coupling[k]);
    const double mf = analysis::median(fine), mc = analysis::median(coarse);
    const double sd = std::sqrt(limits::ou_covariance(k, 1.0, p, limits::OuFlavor::Mode));
    v.require(mf < mc && mf < kCouplingFraction * sd);
    v.detail << "k" << k << ": " << mc << "->" << mf << " (sd " << sd << ") ";
  }
  return v;
}

Verdict oracle_consistency() {
  Verdict v;
  double worst = 0.0;
  for (auto [alpha, eta] : {std::pair{0.0, 0.0}, std::pair{0.5, 0.25}, std::pair{1.0, 0.0}, std::pair{2.0, -1.0},
                            std::pair{-0.3, 0.1}}) {
    const ModelParams p{alpha, eta, 0.0, 1e-3};
    for (int k = 0; k <= 8; ++k) {
      const double a = limits::poisson_mode_variance(k, 1.0, p);
      const double b = limits::ou_covariance(k, 1.0, p, limits::OuFlavor::Mode);
      worst = std::max(worst, std::abs(a / b - 1.0));
    }
  }
  v.require(worst <= kAnchorTol);
  v.detail << "PRM vs OU max rel diff " << worst << "; ";

  double worst_z = 0.0;
  for (auto [alpha, eta] : {std::pair{0.0, 0.0}, std::pair{0.5, 0.25}}) {
    const ModelParams p{alpha, eta, 0.0, 1e-3};
    const limits::LimitOracle oracle(p);
    std::vector<std::vector<cplx>> modes(5);
    std::vector<double> cap;
    for (std::size_t i = 0; i < kOraclePaths; ++i) {
      Philox4x32 rng(stream_seed(8008, i));
      const auto path = oracle.simulate(4, {0.5, 1.0}, rng);
      for (int k = 0; k <= 4; ++k) modes[k].push_back(path.modes.back()[k]);
      cap.push_back(path.cap.back());
    }
    for (int k = 0; k <= 4; ++k) {
      const auto m = analysis::sample_moments(modes[k]);
      worst_z = std::max(worst_z, std::abs(m.var - oracle.variance(k, 1.0)) / m.var_se);
    }
    const auto mc = analysis::sample_moments(cap);
    worst_z = std::max(worst_z, std::abs(mc.var - oracle.variance(-1, 1.0)) / mc.var_se);
  }
  v.require(worst_z <= kOracleSigmas);
  v.detail << "simulator marginals max |z| " << worst_z;
  return v;
}

Verdict discrete() {
  Verdict v;
  {
    SimConfig cfg = continuous(0.0, 0.7, 1e-3);
    cfg.mode = RunMode::Discrete;
    cfg.steps = 2000;
    cfg.keep_events = false;
    const auto traj = chain::run_discrete(cfg, stream_seed(9009, 0));
    double worst = 0.0;
    for (std::size_t n = 0; n < traj.disc_capacity.size(); ++n) {
      const double exact = cfg.params.c * static_cast<double>(n);
      worst = std::max(worst, std::abs(traj.disc_capacity[n] - exact));
    }
    // "exactly": compensated summation of n copies of c, compared to the rounded product
    v.require(worst <= 4.0 * std::numeric_limits<double>::epsilon() * cfg.params.c * cfg.steps);
    v.detail << "alpha=0 max|T_n-cn|=" << worst << "; ";
  }
  {
    SimConfig cfg = continuous(2.0, -1.0, 1e-4);
    cfg.mode = RunMode::Discrete;
    cfg.steps = kDiscSteps;
    cfg.keep_events = false;
    const double target = std::log1p(2.0 * 1e-4 * kDiscSteps) / 2.0;
    std::vector<double> err(kBulkRuns);
    parallel_for(err.size(), workers(), [&](std::size_t i) {
      const auto traj = chain::run_discrete(cfg, stream_seed(9010, i));
      err[i] = std::abs(traj.disc_capacity.back() - target);
    });
    const auto good = std::count_if(err.begin(), err.end(), [](double e) { return e <= kDiscTol; });
    v.require(good >= kBulkRequired);
    v.detail << "Eden N=" << kDiscSteps << ": " << good << "/" << kBulkRuns << " within " << kDiscTol
             << " (median err " << analysis::median(err) << "); ";
  }
  {
    // closed-form inverse of the discrete clock: t(nu) = ((1 + alpha nu)^{zeta/alpha} - 1)/zeta
    Philox4x32 rng(9011);
    double worst = 0.0;
    const double c = 1e-3;
    for (int i = 0; i < 50; ++i) {
      const double alpha = (uniform01(rng) < 0.5 ? -1.0 : 1.0) * (0.05 + 1.95 * uniform01(rng));
      const double zeta = (uniform01(rng) < 0.5 ? -1.0 : 1.0) * (0.05 + 1.95 * uniform01(rng));
      const double nu_max = alpha < 0.0 ? 0.9 / -alpha : 2.0;
      double nu = nu_max * uniform01(rng);
      double t = (std::pow(1.0 + alpha * nu, zeta / alpha) - 1.0) / zeta;
      if (zeta < 0.0 && t >= 0.9 / -zeta) {
        t = 0.9 / -zeta * uniform01(rng);
        nu = (std::pow(1.0 + zeta * t, alpha / zeta) - 1.0) / alpha;
      }
      const double lhs = limits::tau_disc(nu / c, alpha, c);
      const double rhs = limits::tau(t, zeta);
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    v.require(worst <= kDiscIdentityTol);
    v.detail << "time-change identity max err " << worst;
  }
  return v;
}

Verdict stability() {
  Verdict v;
  bool nonneg = true;
  for (double zeta = -3.0; zeta <= 1.0 + 1e-12; zeta += 0.125) {
    for (double sigma : {0.0, 1e-3, 0.1, 0.5, 2.0}) {
      for (int k = 0; k <= 2000; ++k) nonneg = nonneg && limits::multiplier_q(k, zeta, sigma) >= 0.0;
    }
  }
  v.require(nonneg);
  const double zeta = 1.5, sigma = 0.1;
  const int predicted = static_cast<int>(std::ceil(std::log(zeta) / sigma)) - 1;
  const int first = limits::first_unstable_mode(zeta, sigma, 1000);
  const int last = limits::last_unstable_mode(zeta, sigma, 1000);
  // the predicted index is where the unstable band ends; it starts at k = 1 for every sigma
  v.require(std::abs(last - predicted) <= 1);
  v.detail << "q>=0 for zeta<=1: " << (nonneg ? "yes" : "no") << "; zeta=1.5 sigma=0.1: unstable band k=" << first
           << ".." << last << ", first stable k=" << last + 1 << ", ceil(log zeta/sigma)-1=" << predicted;
  return v;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "particle map capacity and a0", slit_map},
      {2, "distortion bound", distortion},
      {3, "exact Poisson baseline", poisson_baseline},
      {4, "bulk scaling limit", bulk},
      {5, "convergence rate", convergence_rate},
      {6, "fluctuation limit", fluctuations},
      {7, "coupling diagnostic", coupling},
      {8, "oracle self-consistency", oracle_consistency},
      {9, "discrete time", discrete},
      {10, "stability boundary", stability},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d (%s) [%.1fs]: %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                v.detail.str().c_str());
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
