#include "rill/experiments/sweeps.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <optional>
#include <tuple>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rill/errors.hpp"

namespace rill::experiments {
namespace {

struct Cell {
  std::vector<std::string> key;
  std::vector<RawConfig> runs;  // one per seed
};

std::vector<Cell> expand(const RawConfig& base, const std::vector<std::vector<std::string>>& keys,
                         const std::vector<std::vector<std::tuple<std::string, std::string, std::string>>>& settings) {
  const auto seeds = get_ints(base, "sweep", "seeds");
  if (seeds.empty()) throw ConfigError("sweep.seeds is empty");
  std::vector<Cell> cells;
  for (std::size_t c = 0; c < keys.size(); ++c) {
    Cell cell{keys[c], {}};
    for (std::int64_t s : seeds) {
      RawConfig cfg = base;
      for (const auto& [section, key, value] : settings[c]) set_value(cfg, section, key, value);
      set_value(cfg, "run", "seed", std::to_string(s));
      cell.runs.push_back(std::move(cfg));
    }
    cells.push_back(std::move(cell));
  }
  return cells;
}

SweepResult execute(const std::vector<Cell>& cells, std::vector<std::string> key_header,
                    const std::vector<std::string>& metrics) {
  std::vector<RawConfig> flat;
  for (const Cell& c : cells) flat.insert(flat.end(), c.runs.begin(), c.runs.end());
  SweepResult res;
  res.records = run_many(flat);
  res.table.header = std::move(key_header);
  for (const auto& m : metrics) {
    res.table.header.push_back("mean_" + m);
    res.table.header.push_back("std_" + m);
  }
  res.table.header.push_back("runs");
  std::size_t at = 0;
  for (const Cell& c : cells) {
    std::vector<std::string> row = c.key;
    for (const auto& m : metrics) {
      std::vector<double> values;
      for (std::size_t i = 0; i < c.runs.size(); ++i) values.push_back(res.records[at + i].final_metrics.at(m));
      row.push_back(format_double(mean_of(values)));
      row.push_back(format_double(std_of(values)));
    }
    row.push_back(std::to_string(c.runs.size()));
    at += c.runs.size();
    res.table.rows.push_back(std::move(row));
  }
  return res;
}

std::vector<std::string> checked_methods(const RawConfig& cfg) {
  auto methods = get_strings(cfg, "sweep", "methods");
  if (methods.empty()) throw ConfigError("sweep.methods is empty");
  for (const auto& m : methods) {
    if (std::find(kMethods.begin(), kMethods.end(), m) == kMethods.end()) {
      throw ConfigError("unknown method '" + m + "' in sweep.methods");
    }
  }
  return methods;
}

}  // namespace

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

std::string main_metric(const std::string& task) {
  if (task == "addition") return "acc_digit";
  if (task == "hierarchy") return "acc";
  if (task == "case_study") return "acc_colour";
  throw ConfigError("unknown task '" + task + "'");
}

std::vector<RunRecord> run_many(const std::vector<RawConfig>& configs) {
  std::vector<std::optional<RunRecord>> out(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  int threads = 0;
  if (!configs.empty()) threads = static_cast<int>(get_int(configs.front(), "sweep", "threads"));
#ifdef _OPENMP
  if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
#endif
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(configs.size()); ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      const auto t0 = std::chrono::steady_clock::now();
      const RunOutcome o = run_experiment(configs[k]);
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      out[k] = make_record(configs[k], o, wall);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  (void)threads;
  std::vector<RunRecord> records;
  for (std::size_t k = 0; k < configs.size(); ++k) {
    if (errors[k]) std::rethrow_exception(errors[k]);
    records.push_back(std::move(*out[k]));
  }
  return records;
}

SweepResult run_completeness_sweep(const RawConfig& cfg) {
  const auto methods = checked_methods(cfg);
  std::vector<std::vector<std::string>> keys;
  std::vector<std::vector<std::tuple<std::string, std::string, std::string>>> settings;
  for (double c : get_doubles(cfg, "sweep", "completeness")) {
    for (const auto& m : methods) {
      keys.push_back({format_double(c), m});
      settings.push_back({{"addition", "completeness", format_double(c)}, {"run", "method", m}});
    }
  }
  return execute(expand(cfg, keys, settings), {"completeness", "method"}, {main_metric(get_value(cfg, "run", "task"))});
}

SweepResult run_epsilon_sweep(const RawConfig& cfg) {
  std::vector<std::vector<std::string>> keys;
  std::vector<std::vector<std::tuple<std::string, std::string, std::string>>> settings;
  for (double e : get_doubles(cfg, "sweep", "epsilons")) {
    if (!(e > 0.0 && e < 1.0)) throw ConfigError("sweep.epsilons must lie in (0, 1)");
    for (const char* m : {"rill_hinge", "rill_l2hinge"}) {
      keys.push_back({format_double(e), m});
      settings.push_back({{"train", "epsilon", format_double(e)}, {"run", "method", m}});
    }
  }
  keys.push_back({"none", "fuzzy"});
  settings.push_back({{"run", "method", "fuzzy"}});
  return execute(expand(cfg, keys, settings), {"epsilon", "method"}, {main_metric(get_value(cfg, "run", "task"))});
}

SweepResult run_labelled_data_sweep(const RawConfig& cfg) {
  const auto methods = checked_methods(cfg);
  const std::string& task = get_value(cfg, "run", "task");
  if (task == "case_study") throw ConfigError("the labelled-data sweep needs the addition or hierarchy task");
  std::vector<std::vector<std::string>> keys;
  std::vector<std::vector<std::tuple<std::string, std::string, std::string>>> settings;
  for (std::int64_t n : get_ints(cfg, "sweep", "counts")) {
    if (n < 1) throw ConfigError("sweep.counts must be at least 1");
    for (const auto& m : methods) {
      keys.push_back({std::to_string(n), m});
      settings.push_back({{task, "labelled_per_class", std::to_string(n)}, {"run", "method", m}});
    }
  }
  std::vector<std::string> metrics{main_metric(task)};
  if (task == "hierarchy") metrics.push_back("sc_acc");
  return execute(expand(cfg, keys, settings), {"labelled_per_class", "method"}, metrics);
}

SweepResult run_clark_comparison(const RawConfig& cfg) {
  if (get_value(cfg, "run", "task") != "addition") throw ConfigError("the Clark comparison runs on the addition task");
  const double c = get_double(cfg, "addition", "completeness");
  if (!(c > 0.0)) throw ConfigError("the Clark comparison needs a non-empty knowledge base");
  const auto methods = checked_methods(cfg);
  std::vector<std::vector<std::string>> keys;
  std::vector<std::vector<std::tuple<std::string, std::string, std::string>>> settings;
  for (const char* kb : {"none", "iff"}) {
    for (const auto& m : methods) {
      keys.push_back({std::string(kb) == "none" ? "original" : "iff", m});
      settings.push_back({{"addition", "clark", kb}, {"run", "method", m}});
    }
  }
  return execute(expand(cfg, keys, settings), {"kb", "method"}, {"acc_digit"});
}

}  // namespace rill::experiments
