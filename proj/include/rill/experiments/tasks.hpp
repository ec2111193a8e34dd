#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rill/experiments/config.hpp"
#include "rill/experiments/csv.hpp"
#include "rill/learner/mlp.hpp"
#include "rill/learner/trainer.hpp"

namespace rill::experiments {

struct RunOutcome {
  std::string task;
  std::string method;
  std::uint64_t seed = 0;
  std::vector<learner::EpochMetrics> history;
  /// Final scalar results, e.g. acc_digit, acc_colour, blue_freq.
  std::map<std::string, double> final_metrics;
  /// The KB actually trained with, in the rule DSL.
  std::string kb_text;
  learner::MLP model;
  /// Case study only: per-test-sample loss of the rule, relevant/irrelevant.
  Table distribution;
};

/// Runs [run] task with [run] method and [run] seed. `cfg` must already
/// carry every schema key (see with_defaults). Dispatches to the case
/// study, the addition task or the hierarchy task.
RunOutcome run_experiment(const RawConfig& cfg);

RunOutcome run_case_study(const RawConfig& cfg, const std::string& method, std::uint64_t seed);
RunOutcome run_addition(const RawConfig& cfg, const std::string& method, std::uint64_t seed);
RunOutcome run_hierarchy(const RawConfig& cfg, const std::string& method, std::uint64_t seed);

/// Colour/shape predicates of the case study mapped to heads 1 and 0.
learner::PredicateMap case_study_predicates();

}  // namespace rill::experiments
