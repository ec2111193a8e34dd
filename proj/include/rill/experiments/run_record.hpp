#pragma once

#include <map>
#include <string>
#include <vector>

#include "rill/experiments/config.hpp"
#include "rill/experiments/tasks.hpp"

namespace rill::experiments {

/// Everything needed to re-run and check one training run.
struct RunRecord {
  std::string config_text;  // canonical, with every key resolved
  std::uint64_t seed = 0;
  std::string task;
  std::string method;
  std::vector<learner::EpochMetrics> history;
  std::map<std::string, double> final_metrics;
  double wall_time_s = 0.0;
  std::string kb_sha1;  // git blob hash of the KB text
};

/// SHA-1 of "blob <size>\0<text>", as `git hash-object` prints it.
std::string git_blob_sha1(const std::string& text);

RunRecord make_record(const RawConfig& cfg, const RunOutcome& outcome, double wall_time_s);

std::string to_json(const RunRecord& r);
/// Throws FormatError on malformed JSON or missing fields.
RunRecord record_from_json(const std::string& text);
void save_record(const std::string& path, const RunRecord& r);
RunRecord load_record(const std::string& path);

struct ReplayResult {
  RunOutcome outcome;
  bool identical = false;  // final metrics and per-epoch history bit-identical
  std::vector<std::string> differences;
};

/// Re-runs the record's config and compares results exactly.
ReplayResult replay(const RunRecord& r);

}  // namespace rill::experiments
