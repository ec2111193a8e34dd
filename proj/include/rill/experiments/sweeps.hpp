#pragma once

#include <string>
#include <vector>

#include "rill/experiments/csv.hpp"
#include "rill/experiments/run_record.hpp"

namespace rill::experiments {

struct SweepResult {
  Table table;                     // one row per cell, mean and std over seeds
  std::vector<RunRecord> records;  // every run, in cell-then-seed order
};

/// Runs each config on its own worker (sweep.threads of the first config,
/// 0 for the OpenMP default) and returns records in input order.
std::vector<RunRecord> run_many(const std::vector<RawConfig>& configs);

/// Cells: completeness x method, over sweep.seeds. Metric: the task's
/// main accuracy.
SweepResult run_completeness_sweep(const RawConfig& cfg);
/// Cells: epsilon x {rill_hinge, rill_l2hinge}, plus one fuzzy (identity) row.
SweepResult run_epsilon_sweep(const RawConfig& cfg);
/// Cells: labelled count per class x method. The hierarchy task adds a
/// super-class accuracy column.
SweepResult run_labelled_data_sweep(const RawConfig& cfg);
/// Cells: {original, iff} KB x method at addition.completeness.
/// Throws ConfigError when the configured KB would be empty.
SweepResult run_clark_comparison(const RawConfig& cfg);

/// acc_digit, acc or acc_colour depending on the task.
std::string main_metric(const std::string& task);

double mean_of(const std::vector<double>& v);
/// Sample standard deviation (n - 1); 0 for fewer than two values.
double std_of(const std::vector<double>& v);

}  // namespace rill::experiments
