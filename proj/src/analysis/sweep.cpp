#include "ale/analysis/sweep.hpp"

#include <ostream>

#include "ale/analysis/fluct.hpp"
#include "ale/analysis/stats.hpp"
#include "ale/chain/simulator.hpp"
#include "ale/errors.hpp"
#include "ale/parallel.hpp"
#include "ale/rng.hpp"

namespace ale::analysis {

std::vector<const SweepRow*> SweepTable::metric_rows(const std::string& metric) const {
  std::vector<const SweepRow*> out;
  for (const auto& r : rows) {
    if (r.metric == metric) out.push_back(&r);
  }
  return out;
}

SweepTable convergence_sweep(const SimConfig& base, std::span<const double> c_list, int replicas,
                             unsigned parallelism) {
  if (base.mode != RunMode::Continuous) throw ConfigError("convergence sweep runs the continuous-time chain");
  if (replicas < 1) throw ConfigError("sweep needs at least one replica");
  if (c_list.empty()) throw ConfigError("sweep needs a capacity list");
  for (std::size_t j = 0; j < c_list.size(); ++j) {
    if (!(c_list[j] > 0.0)) throw ConfigError("sweep capacities must be positive");
    if (j > 0 && !(c_list[j] < c_list[j - 1])) throw ConfigError("sweep capacity list must be strictly decreasing");
  }

  SweepTable table;
  for (std::size_t j = 0; j < c_list.size(); ++j) {
    SimConfig cfg = base;
    cfg.params.c = c_list[j];
    cfg.params.sigma = cfg.sigma_rule.resolve(c_list[j]);
    cfg.keep_events = false;
    cfg.snapshot_count = 1;

    struct Outcome {
      double cap_err = 0.0;
      double shape_err = 0.0;
      bool usable = false;
    };
    std::vector<Outcome> out(static_cast<std::size_t>(replicas));
    const std::uint64_t level_seed = stream_seed(base.master_seed, j);
    parallel_for(out.size(), parallelism, [&](std::size_t i) {
      const auto traj = chain::run(cfg, stream_seed(level_seed, i));
      out[i].cap_err = traj.summary.sup_cap_err;
      out[i].shape_err = shape_error(traj.cluster, cfg.fluct_radius, static_cast<std::size_t>(cfg.grid_m));
      out[i].usable = traj.summary.envelope_violations == 0 && !traj.summary.aborted;
    });

    SweepRow cap_row;
    cap_row.c = cfg.params.c;
    cap_row.sigma = cfg.params.sigma;
    SweepRow shape_row = cap_row;
    cap_row.metric = kCapError;
    shape_row.metric = kShapeError;
    for (const auto& o : out) {
      if (!o.usable) {
        ++cap_row.excluded;
        ++shape_row.excluded;
        continue;
      }
      cap_row.values.push_back(o.cap_err);
      shape_row.values.push_back(o.shape_err);
    }
    for (SweepRow* row : {&cap_row, &shape_row}) {
      row->n_replicas = row->values.size();
      if (!row->values.empty()) {
        row->median = median(row->values);
        row->p90 = quantile(row->values, 0.9);
      }
      table.rows.push_back(std::move(*row));
    }
  }

  if (c_list.size() >= 2) {
    for (const char* metric : {kCapError, kShapeError}) {
      std::vector<double> cs, meds;
      for (const auto* r : table.metric_rows(metric)) {
        if (r->n_replicas == 0 || !(r->median > 0.0)) continue;
        cs.push_back(r->c);
        meds.push_back(r->median);
      }
      if (cs.size() >= 2) table.slopes[metric] = loglog_slope(cs, meds);
    }
  }
  return table;
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
  out.precision(17);
  out << "c,sigma,metric,median,p90,n_replicas,slope\n";
  for (const auto& r : table.rows) {
    out << r.c << ',' << r.sigma << ',' << r.metric << ',' << r.median << ',' << r.p90 << ',' << r.n_replicas << ',';
    if (auto it = table.slopes.find(r.metric); it != table.slopes.end()) out << it->second;
    out << '\n';
  }
}

}  // namespace ale::analysis
