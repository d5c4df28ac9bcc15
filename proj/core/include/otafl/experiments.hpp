#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "otafl/bounds.hpp"
#include "otafl/config.hpp"
#include "otafl/csv.hpp"
#include "otafl/fl.hpp"

namespace otafl {

/// Files written by a command and the checks that failed, each as
/// "<check>:<detail>" so callers can emit them verbatim.
struct CommandOutcome {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
  void merge(CommandOutcome other);
};

/// Pass threshold on mc / bound.
inline constexpr double kMcSlack = 1.05;
/// Allowed deviation of the fitted log-log slope from -1.
inline constexpr double kScalingTolerance = 0.05;

// bounds -------------------------------------------------------------------

/// One row per (eta, N) in the Cartesian product of the sweep lists.
CsvTable bounds_table(const ExperimentConfig& cfg);
CommandOutcome cmd_bounds(const ExperimentConfig& cfg);

// validate -----------------------------------------------------------------

struct ValidationRow {
  std::string lemma;  // "lemma1" | "lemma2"
  BoundParams params;
  McValidation result;
  bool pass = false;
};

struct ScalingRow {
  std::string lemma;
  double slope = 0.0;
  bool skipped = false;  // fewer than two distinct N, or a zero estimate
  bool pass = false;
};

struct ValidationReport {
  std::vector<ValidationRow> rows;
  std::vector<ScalingRow> scaling;
};

ValidationReport run_validation(const ExperimentConfig& cfg);
CsvTable validation_table(const ExperimentConfig& cfg, const ValidationReport& report);
CsvTable scaling_table(const ExperimentConfig& cfg, const ValidationReport& report);
CommandOutcome cmd_validate(const ExperimentConfig& cfg);

// fl -----------------------------------------------------------------------

struct SweepPoint {
  std::string sweep;  // "eta" | "N"
  double eta = 0.0;
  int antennas = 0;
};

struct AggregateRound {
  int round = 0;
  double a_mean = 0.0;
  double a_std = 0.0;
  double eps_sq_mean = 0.0;
  double partial_bound = 0.0;
  double loss_ideal_mean = 0.0;
  double loss_dist_mean = 0.0;
};

struct SweepResult {
  SweepPoint point;
  std::vector<RunResult> runs;            // one per replicate seed
  std::vector<AggregateRound> aggregate;  // seed averages per round
};

/// eta-sweep at the base antenna count, then N-sweep at the base eta.
std::vector<SweepPoint> fl_sweep_points(const ExperimentConfig& cfg);
std::vector<SweepResult> run_fl_sweeps(const ExperimentConfig& cfg);
std::vector<AggregateRound> aggregate_runs(const std::vector<RunResult>& runs);

CsvTable run_table(const ExperimentConfig& cfg, const SweepPoint& point, int replicate, const RunResult& run);
CsvTable aggregate_table(const ExperimentConfig& cfg, const std::vector<SweepResult>& results);
CommandOutcome cmd_fl(const ExperimentConfig& cfg);

/// bounds + validate + fl.
CommandOutcome cmd_all(const ExperimentConfig& cfg);

}  // namespace otafl
