#include "otafl/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "otafl/parallel.hpp"
#include "otafl/version.hpp"

namespace otafl {

namespace {

void add_header(CsvTable& table, const ExperimentConfig& cfg, const std::string& command) {
  table.add_meta("otafl_version", kVersion);
  table.add_meta("command", command);
  for (auto& [key, value] : cfg.resolved()) table.add_meta(key, value);
}

std::filesystem::path out_path(const ExperimentConfig& cfg, const std::string& name) {
  return std::filesystem::path(cfg.run.out) / name;
}

std::filesystem::path write_table(const ExperimentConfig& cfg, const std::string& name, const CsvTable& table) {
  const auto path = out_path(cfg, name);
  write_file_atomic(path, table.str());
  return path;
}

std::string mc_ratio_text(const McValidation& v) { return v.exact ? "exact" : format_double(v.ratio); }

}  // namespace

void CommandOutcome::merge(CommandOutcome other) {
  files.insert(files.end(), other.files.begin(), other.files.end());
  failures.insert(failures.end(), other.failures.begin(), other.failures.end());
}

CsvTable bounds_table(const ExperimentConfig& cfg) {
  cfg.validate();
  CsvTable table(bound_report_columns());
  add_header(table, cfg, "bounds");
  for (double eta : cfg.sweep.eta) {
    for (int n : cfg.sweep.antennas) {
      const BoundParams p = cfg.bound_params(n, eta);
      table.add_row(bound_report_row(p, single_round_error(p)));
    }
  }
  return table;
}

CommandOutcome cmd_bounds(const ExperimentConfig& cfg) {
  CommandOutcome out;
  out.files.push_back(write_table(cfg, "bounds.csv", bounds_table(cfg)));
  return out;
}

ValidationReport run_validation(const ExperimentConfig& cfg) {
  cfg.validate();
  ValidationReport report;
  const std::uint64_t seeds[2] = {replicate_seed(cfg.run.seed, 1001), replicate_seed(cfg.run.seed, 1002)};
  for (int which = 0; which < 2; ++which) {
    const std::string lemma = which == 0 ? "lemma1" : "lemma2";
    std::vector<double> ns, estimates;
    for (int n : cfg.sweep.antennas) {
      ValidationRow row;
      row.lemma = lemma;
      row.params = cfg.bound_params(n, cfg.fl.eta);
      row.result = which == 0 ? mc_validate_lemma1(row.params, cfg.run.mc_trials, seeds[which], cfg.run.jobs)
                              : mc_validate_lemma2(row.params, cfg.run.mc_trials, seeds[which], cfg.run.jobs);
      row.pass = row.result.passes(kMcSlack);
      ns.push_back(n);
      estimates.push_back(row.result.mc_estimate);
      report.rows.push_back(std::move(row));
    }

    ScalingRow scaling;
    scaling.lemma = lemma;
    const std::set<double> distinct(ns.begin(), ns.end());
    const bool any_zero = std::any_of(estimates.begin(), estimates.end(), [](double e) { return !(e > 0.0); });
    if (distinct.size() < 2 || any_zero) {
      scaling.skipped = true;
      scaling.pass = true;
    } else {
      scaling.slope = log_log_slope(ns, estimates);
      scaling.pass = std::abs(scaling.slope + 1.0) <= kScalingTolerance;
    }
    report.scaling.push_back(scaling);
  }
  return report;
}

CsvTable validation_table(const ExperimentConfig& cfg, const ValidationReport& report) {
  CsvTable table({"lemma", "K", "N", "L", "trials", "seed", "mc_estimate", "bound", "ratio", "pass"});
  add_header(table, cfg, "validate");
  table.add_meta("pass_rule", "ratio <= " + format_double(kMcSlack));
  for (const auto& row : report.rows) {
    table.add_row({row.lemma, std::to_string(row.params.devices), std::to_string(row.params.antennas),
                   std::to_string(row.params.paths), std::to_string(row.result.trials),
                   std::to_string(row.result.seed), format_double(row.result.mc_estimate),
                   format_double(row.result.bound), mc_ratio_text(row.result), row.pass ? "1" : "0"});
  }
  return table;
}

CsvTable scaling_table(const ExperimentConfig& cfg, const ValidationReport& report) {
  CsvTable table({"lemma", "slope", "status"});
  add_header(table, cfg, "validate");
  table.add_meta("pass_rule", "|slope + 1| <= " + format_double(kScalingTolerance));
  for (const auto& s : report.scaling) {
    table.add_row({s.lemma, s.skipped ? "nan" : format_double(s.slope),
                   s.skipped ? "skipped" : (s.pass ? "pass" : "fail")});
  }
  return table;
}

CommandOutcome cmd_validate(const ExperimentConfig& cfg) {
  const ValidationReport report = run_validation(cfg);
  CommandOutcome out;
  out.files.push_back(write_table(cfg, "validate.csv", validation_table(cfg, report)));
  out.files.push_back(write_table(cfg, "validate_scaling.csv", scaling_table(cfg, report)));
  for (const auto& row : report.rows) {
    if (!row.pass) {
      out.failures.push_back(row.lemma + "_domination:N=" + std::to_string(row.params.antennas) +
                             ",ratio=" + mc_ratio_text(row.result));
    }
  }
  for (const auto& s : report.scaling) {
    if (!s.pass) out.failures.push_back(s.lemma + "_scaling:slope=" + format_double(s.slope));
  }
  return out;
}

std::vector<SweepPoint> fl_sweep_points(const ExperimentConfig& cfg) {
  std::vector<SweepPoint> points;
  for (double eta : cfg.sweep.eta) points.push_back({"eta", eta, cfg.system.antennas});
  for (int n : cfg.sweep.antennas) points.push_back({"N", cfg.fl.eta, n});
  return points;
}

std::vector<AggregateRound> aggregate_runs(const std::vector<RunResult>& runs) {
  if (runs.empty()) return {};
  const std::size_t rounds = runs.front().rounds.size();
  const double count = static_cast<double>(runs.size());
  std::vector<AggregateRound> agg(rounds);
  for (std::size_t t = 0; t < rounds; ++t) {
    AggregateRound& a = agg[t];
    a.round = runs.front().rounds[t].round;
    a.partial_bound = runs.front().rounds[t].partial_bound;
    double sum_sq = 0.0;
    for (const auto& r : runs) {
      const RoundRecord& rec = r.rounds[t];
      a.a_mean += rec.accumulated;
      sum_sq += rec.accumulated * rec.accumulated;
      a.eps_sq_mean += rec.eps_sq;
      a.loss_ideal_mean += rec.loss_ideal;
      a.loss_dist_mean += rec.loss_dist;
    }
    a.a_mean /= count;
    a.eps_sq_mean /= count;
    a.loss_ideal_mean /= count;
    a.loss_dist_mean /= count;
    a.a_std = runs.size() > 1 ? std::sqrt(std::max(0.0, (sum_sq - count * a.a_mean * a.a_mean) / (count - 1.0))) : 0.0;
  }
  return agg;
}

std::vector<SweepResult> run_fl_sweeps(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<SweepPoint> points = fl_sweep_points(cfg);
  const std::size_t replicates = static_cast<std::size_t>(cfg.run.trials);

  std::vector<SweepResult> results(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    results[i].point = points[i];
    results[i].runs.resize(replicates);
  }
  parallel_for(points.size() * replicates, cfg.run.jobs, [&](std::size_t job) {
    const std::size_t p = job / replicates;
    const std::size_t s = job % replicates;
    const SweepPoint& point = points[p];
    const std::uint64_t seed = replicate_seed(cfg.run.seed, s);
    results[p].runs[s] = run(cfg.fl_config(point.antennas, point.eta, seed), cfg.bound_params(point.antennas, point.eta));
  });
  for (auto& r : results) r.aggregate = aggregate_runs(r.runs);
  return results;
}

CsvTable run_table(const ExperimentConfig& cfg, const SweepPoint& point, int replicate, const RunResult& run) {
  CsvTable table({"round", "loss_ideal", "loss_dist", "eps_sq", "A_t", "partial_bound"});
  add_header(table, cfg, "fl");
  table.add_meta("sweep", point.sweep);
  table.add_meta("point.eta", format_double(point.eta));
  table.add_meta("point.N", std::to_string(point.antennas));
  table.add_meta("replicate", std::to_string(replicate));
  table.add_meta("replicate_seed", std::to_string(replicate_seed(cfg.run.seed, replicate)));
  table.add_meta("e_t", format_double(run.e_t));
  table.add_meta("final_bound", format_double(run.final_bound));
  table.add_meta("final_actual", format_double(run.final_actual));
  for (const auto& rec : run.rounds) {
    table.add_row({std::to_string(rec.round), format_double(rec.loss_ideal), format_double(rec.loss_dist),
                   format_double(rec.eps_sq), format_double(rec.accumulated), format_double(rec.partial_bound)});
  }
  return table;
}

CsvTable aggregate_table(const ExperimentConfig& cfg, const std::vector<SweepResult>& results) {
  CsvTable table({"sweep", "eta", "N", "round", "A_mean", "A_std", "eps_sq_mean", "partial_bound",
                  "loss_ideal_mean", "loss_dist_mean", "seeds"});
  add_header(table, cfg, "fl");
  for (const auto& r : results) {
    for (const auto& a : r.aggregate) {
      table.add_row({r.point.sweep, format_double(r.point.eta), std::to_string(r.point.antennas),
                     std::to_string(a.round), format_double(a.a_mean), format_double(a.a_std),
                     format_double(a.eps_sq_mean), format_double(a.partial_bound),
                     format_double(a.loss_ideal_mean), format_double(a.loss_dist_mean),
                     std::to_string(r.runs.size())});
    }
  }
  return table;
}

CommandOutcome cmd_fl(const ExperimentConfig& cfg) {
  const std::vector<SweepResult> results = run_fl_sweeps(cfg);
  CommandOutcome out;
  if (cfg.run.per_seed_csv) {
    for (const auto& r : results) {
      for (std::size_t s = 0; s < r.runs.size(); ++s) {
        const std::string name = "runs/fl_" + r.point.sweep + "_eta" + format_double(r.point.eta) + "_N" +
                                 std::to_string(r.point.antennas) + "_seed" + std::to_string(s) + ".csv";
        out.files.push_back(write_table(cfg, name, run_table(cfg, r.point, static_cast<int>(s), r.runs[s])));
      }
    }
  }
  out.files.push_back(write_table(cfg, "fl_aggregate.csv", aggregate_table(cfg, results)));

  for (const auto& r : results) {
    for (const auto& a : r.aggregate) {
      if (a.a_mean > a.partial_bound) {
        out.failures.push_back("fl_bound_domination:sweep=" + r.point.sweep + ",eta=" + format_double(r.point.eta) +
                               ",N=" + std::to_string(r.point.antennas) + ",round=" + std::to_string(a.round));
        break;
      }
    }
  }
  return out;
}

CommandOutcome cmd_all(const ExperimentConfig& cfg) {
  CommandOutcome out = cmd_bounds(cfg);
  out.merge(cmd_validate(cfg));
  out.merge(cmd_fl(cfg));
  return out;
}

}  // namespace otafl
