#include "ale/harness/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "ale/analysis/stats.hpp"
#include "ale/analysis/sweep.hpp"
#include "ale/chain/simulator.hpp"
#include "ale/conformal/cluster.hpp"
#include "ale/errors.hpp"
#include "ale/harness/batch.hpp"
#include "ale/harness/config.hpp"
#include "ale/limits/multiplier.hpp"
#include "ale/limits/oracle.hpp"
#include "ale/limits/time_change.hpp"
#include "ale/rng.hpp"

namespace ale::harness {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct RunOptions {
  std::string config_path;
  std::string preset_name;
  std::optional<std::uint64_t> seed;
  std::optional<int> replicas;
  unsigned parallelism = 1;
  std::string out;
};

void add_run_options(CLI::App* cmd, RunOptions& o, bool out_required) {
  cmd->add_option("--config", o.config_path, "JSON config file");
  cmd->add_option("--preset", o.preset_name, "Shipped preset (" + [] {
    std::string names;
    for (const auto& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
    return names;
  }() + ")");
  cmd->add_option("--seed", o.seed, "Override master_seed");
  cmd->add_option("--replicas", o.replicas, "Override the replica count");
  cmd->add_option("--parallelism", o.parallelism, "Worker threads")->check(CLI::PositiveNumber);
  auto* opt = cmd->add_option("--out", o.out, "Output path");
  if (out_required) opt->required();
}

SimConfig resolve_config(const RunOptions& o) {
  if (o.config_path.empty() == o.preset_name.empty()) throw ConfigError("give exactly one of --config or --preset");
  SimConfig cfg = o.config_path.empty() ? preset(o.preset_name) : load_config(o.config_path);
  if (o.seed) cfg.master_seed = *o.seed;
  if (o.replicas) cfg.replicas = *o.replicas;
  validate(cfg);
  return cfg;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

int do_simulate(const RunOptions& o, std::ostream& out, std::ostream& err) {
  const SimConfig cfg = resolve_config(o);
  const BatchResult r = run_batch(cfg, o.out, o.parallelism);
  out << "config_hash " << r.config_hash << "\n";
  out << "replicas " << r.replicas.size() << " failed " << r.failed() << " envelope_violations "
      << r.envelope_violations << "\n";
  for (const auto& rep : r.replicas) {
    if (!rep.complete()) err << "replica " << rep.index << " failed: " << rep.error << "\n";
  }
  return r.failed() == 0 ? kExitOk : kExitRuntime;
}

int do_sweep(const RunOptions& o, const std::vector<double>& c_override, std::ostream& out) {
  SimConfig cfg = resolve_config(o);
  if (!c_override.empty()) {
    cfg.sweep_c = c_override;
    validate(cfg);
  }
  const auto table = analysis::convergence_sweep(cfg, cfg.sweep_c, cfg.replicas, o.parallelism);
  const fs::path dir(o.out);
  fs::create_directories(dir);
  save_config(cfg, dir / "config.json");
  {
    auto f = open_out((dir / "sweep.csv").string());
    analysis::write_sweep_csv(f, table);
  }
  nlohmann::ordered_json j;
  j["config_hash"] = config_hash(cfg);
  j["slopes"] = table.slopes;
  {
    auto f = open_out((dir / "sweep.json").string());
    f << j.dump(2) << '\n';
  }
  analysis::write_sweep_csv(out, table);
  return kExitOk;
}

int do_analyze(const std::string& runs_dir, bool with_oracle, bool force, const std::string& out_dir,
               std::ostream& out) {
  const LoadedRuns runs = load_runs(runs_dir, force);
  if (runs.samples.empty()) throw std::runtime_error("no completed replicas under " + runs_dir);
  const double t = runs.samples.front().t;
  const analysis::OracleVariances oracle = with_oracle ? oracle_for(runs.config, t) : analysis::OracleVariances{};
  const analysis::StatReport report = analysis::replica_stats(runs.samples, oracle);
  const fs::path dir = out_dir.empty() ? fs::path(runs_dir) : fs::path(out_dir);
  fs::create_directories(dir);
  {
    auto f = open_out((dir / "report.csv").string());
    analysis::write_report_csv(f, report);
  }
  {
    auto f = open_out((dir / "report.json").string());
    f << analysis::report_json(report, runs.config_hash) << '\n';
  }
  analysis::write_report_csv(out, report);
  return kExitOk;
}

struct OracleOptions {
  bool tau = false, nu = false, q = false, cov = false, tdisc = false, tcrit = false;
  double alpha = 0.0;
  std::optional<double> eta, zeta;
  double sigma = 0.0;
  double c = 1e-3;
  double t = 1.0;
  double n = 0.0;
  int k = 0;
  std::string flavor = "mode";
  std::string variant = "Q";
};

int do_oracle(const OracleOptions& o, std::ostream& out) {
  ModelParams p;
  p.alpha = o.alpha;
  p.sigma = o.sigma;
  p.c = o.c;
  if (o.eta && o.zeta && std::abs(o.alpha + *o.eta - *o.zeta) > 1e-12) {
    throw ConfigError("--zeta disagrees with --alpha + --eta");
  }
  p.eta = o.eta ? *o.eta : (o.zeta ? *o.zeta - o.alpha : 0.0);
  const double zeta = p.zeta();
  if (!(o.tau || o.nu || o.q || o.cov || o.tdisc || o.tcrit)) {
    throw ConfigError("oracle: request at least one of --tau --nu --q --cov --tdisc --tcrit");
  }
  out << "quantity,value\n";
  if (o.tau) out << "tau," << num(limits::tau(o.t, zeta)) << "\n";
  if (o.nu) out << "nu," << num(limits::nu(o.t, p.alpha, zeta)) << "\n";
  if (o.q) {
    const auto v = limits::parse_multiplier(o.variant);
    out << "q_" << limits::multiplier_name(v) << "," << num(limits::multiplier_q(o.k, zeta, p.sigma, v)) << "\n";
  }
  if (o.cov) {
    double v = 0.0;
    if (o.flavor == "mode") {
      v = limits::ou_covariance(o.k, o.t, p, limits::OuFlavor::Mode);
    } else if (o.flavor == "cap") {
      v = limits::ou_covariance(o.k, o.t, p, limits::OuFlavor::Cap);
    } else if (o.flavor == "disc") {
      v = limits::ou_covariance(o.k, o.t, p, limits::OuFlavor::Disc);
    } else if (o.flavor == "poisson") {
      v = limits::poisson_mode_variance(o.k, o.t, p);
    } else {
      throw ConfigError("unknown covariance flavor '" + o.flavor + "'");
    }
    out << "cov_" << o.flavor << "," << num(v) << "\n";
  }
  if (o.tdisc) out << "tau_disc," << num(limits::tau_disc(o.n, p.alpha, p.c)) << "\n";
  if (o.tcrit) {
    out << "t_zeta," << num(limits::t_crit(zeta)) << "\n";
    out << "n_alpha," << num(limits::n_crit(p.alpha)) << "\n";
  }
  return kExitOk;
}

int do_trace(const RunOptions& o, int replica, double rho, std::ostream& out) {
  const SimConfig cfg = resolve_config(o);
  const std::uint64_t seed = stream_seed(cfg.master_seed, static_cast<std::uint64_t>(replica));
  const chain::Trajectory traj = cfg.mode == RunMode::Continuous ? chain::run(cfg, seed) : chain::run_discrete(cfg, seed);
  const auto pts = conformal::boundary_trace(traj.cluster, static_cast<std::size_t>(cfg.grid_m), rho);
  auto f = open_out(o.out);
  f << "theta,x,y\n";
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(pts.size());
    f << num(theta) << ',' << num(pts[j].real()) << ',' << num(pts[j].imag()) << '\n';
  }
  out << "wrote " << pts.size() << " boundary points to " << o.out << "\n";
  return kExitOk;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Aggregate Loewner evolution simulator"};
  app.name("ale");
  app.require_subcommand(1);

  RunOptions sim_opts;
  auto* sim = app.add_subcommand("simulate", "Run a replica batch into a run directory");
  add_run_options(sim, sim_opts, true);

  RunOptions sweep_opts;
  std::vector<double> sweep_c;
  auto* sweep = app.add_subcommand("sweep", "Convergence sweep over decreasing c");
  add_run_options(sweep, sweep_opts, true);
  sweep->add_option("--c", sweep_c, "Capacities, strictly decreasing (overrides sweep_c)");

  std::string runs_dir, analyze_out;
  bool with_oracle = false, force = false;
  auto* analyze = app.add_subcommand("analyze", "Replica statistics of a run directory");
  analyze->add_option("--runs", runs_dir, "Run directory")->required();
  analyze->add_flag("--oracle", with_oracle, "Compare variances with the limit oracle");
  analyze->add_flag("--force", force, "Accept replicas with mixed config hashes");
  analyze->add_option("--out", analyze_out, "Report directory (default: the run directory)");

  OracleOptions orc;
  auto* oracle = app.add_subcommand("oracle", "Print limit quantities as CSV");
  oracle->add_flag("--tau", orc.tau, "tau(t)");
  oracle->add_flag("--nu", orc.nu, "nu(t)");
  oracle->add_flag("--q", orc.q, "multiplier q(k)");
  oracle->add_flag("--cov", orc.cov, "variance of the limit process");
  oracle->add_flag("--tdisc", orc.tdisc, "tau_disc(n)");
  oracle->add_flag("--tcrit", orc.tcrit, "t_zeta and n_alpha");
  oracle->add_option("--alpha", orc.alpha);
  oracle->add_option("--eta", orc.eta);
  oracle->add_option("--zeta", orc.zeta);
  oracle->add_option("--sigma", orc.sigma);
  oracle->add_option("--c", orc.c);
  oracle->add_option("--t", orc.t);
  oracle->add_option("--n", orc.n);
  oracle->add_option("--k", orc.k);
  oracle->add_option("--flavor", orc.flavor, "mode, cap, disc or poisson")
      ->check(CLI::IsMember({"mode", "cap", "disc", "poisson"}));
  oracle->add_option("--variant", orc.variant, "Q, Q0, Q1, Qtilde0 or Qtilde1");

  RunOptions trace_opts;
  int trace_replica = 0;
  double rho = 1.0 + 1e-6;
  auto* trace = app.add_subcommand("trace", "Boundary polyline of one replica's final cluster");
  add_run_options(trace, trace_opts, true);
  trace->add_option("--replica", trace_replica, "Replica index")->check(CLI::NonNegativeNumber);
  trace->add_option("--rho", rho, "Trace radius");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitValidation;
  }

  try {
    if (sim->parsed()) return do_simulate(sim_opts, out, err);
    if (sweep->parsed()) return do_sweep(sweep_opts, sweep_c, out);
    if (analyze->parsed()) return do_analyze(runs_dir, with_oracle, force, analyze_out, out);
    if (oracle->parsed()) return do_oracle(orc, out);
    if (trace->parsed()) return do_trace(trace_opts, trace_replica, rho, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "runtime failure: " << e.what() << "\n";
    return kExitRuntime;
  }
  err << app.help();
  return kExitValidation;
}

int cli_dispatch(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_dispatch(args, std::cout, std::cerr);
}

}  // namespace ale::harness
