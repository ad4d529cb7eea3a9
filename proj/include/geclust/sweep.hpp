#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geclust/pipeline.hpp"
#include "geclust/sbm.hpp"

namespace geclust {

/// Which SBM parameter a sweep varies; the others stay at their base values.
enum class Experiment { sigma, dout, nodes, nobs };

Experiment parse_experiment(const std::string& name);
std::string to_string(Experiment experiment);

/// Base config with `value` applied to the swept parameter. For `nodes` the
/// community count changes (community size fixed).
SbmConfig apply_sweep_value(const SbmConfig& base, Experiment experiment, double value);

/// Seed for one (experiment, value, run) cell.
std::uint64_t cell_seed(std::uint64_t base_seed, Experiment experiment, double value, std::size_t run);

struct SweepConfig {
  Experiment experiment = Experiment::sigma;
  std::vector<double> values;
  std::size_t runs = 10;
  SbmConfig base;
  std::vector<Method> methods = all_methods();
  /// Method, seed and threads are overridden per cell.
  PipelineSpec pipeline;
  /// Cells run concurrently; each cell is single-threaded.
  unsigned threads = 1;
};

struct SweepRecord {
  Experiment experiment;
  double value = 0.0;
  Method method = Method::baseline;
  std::size_t run = 0;
  bool ok = false;
  double ami = 0.0;
  std::size_t n_clusters = 0;
  std::size_t n_noise = 0;
  double eps = 0.0;
  /// tSNE methods only.
  std::optional<double> initial_kl;
  std::optional<double> final_kl;
  std::uint64_t seed = 0;
  std::string error;
};

struct SweepSummaryRow {
  double value = 0.0;
  Method method = Method::baseline;
  double mean = 0.0;
  /// Population standard deviation over successful runs.
  double std = 0.0;
  std::size_t n_ok = 0;
  std::size_t n_failed = 0;
};

struct SweepResult {
  Experiment experiment = Experiment::sigma;
  std::vector<SweepRecord> records;  // ordered by value, run, method
  std::vector<SweepSummaryRow> summary;  // ordered by value, method

  /// Mean AMI per value for one method, in value order.
  std::vector<double> series(Method method) const;
  /// Mean over every successful record of one method.
  double overall_mean(Method method) const;
  bool complete() const;
};

/// Generates one dataset per (value, run), runs every method on it and scores
/// AMI against the planted communities. Failed runs are recorded and excluded.
SweepResult sweep(const SweepConfig& cfg);

/// `experiment,value,method,run,ami` (failed runs leave ami empty and add
/// status/error columns).
std::string format_sweep_csv(const SweepResult& result);
/// `experiment,value,method,mean,std,n_ok,n_failed`.
std::string format_summary_csv(const SweepResult& result);

struct ValidationOptions {
  std::string out_dir = "validation";
  std::size_t runs = 10;
  SbmConfig base;
  PipelineSpec pipeline;
  std::vector<Method> methods = all_methods();
  std::vector<double> sigma_values{0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0};
  std::vector<double> dout_values{1, 2, 3, 4, 5, 6};
  std::vector<double> nodes_values{100, 200, 400, 800};
  std::vector<double> nobs_values{100, 200, 300, 500, 700};
  unsigned threads = 1;
};

struct ValidationSummary {
  std::vector<SweepResult> sweeps;  // sigma, dout, nodes, nobs
  /// Method -> mean AMI per experiment (Table-style summary).
  std::vector<std::pair<Method, std::vector<double>>> table;
  std::vector<std::string> incomplete;
};

/// Runs all four sweeps and writes `<exp>_runs.csv`, `<exp>_summary.csv`,
/// `<exp>.svg`, `summary_table.csv` and `report.json` under out_dir.
ValidationSummary reproduce_validation(const ValidationOptions& options);

}  // namespace geclust
