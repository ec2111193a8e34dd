#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "rill/errors.hpp"
#include "rill/experiments/config.hpp"
#include "rill/experiments/datasets.hpp"
#include "rill/experiments/diagnostics.hpp"
#include "rill/experiments/run_record.hpp"
#include "rill/experiments/sweeps.hpp"
#include "rill/fuzzy/diagnostics.hpp"
#include "rill/learner/checkpoint.hpp"
#include "rill/logic/parser.hpp"

namespace fs = std::filesystem;
using namespace rill;
using namespace rill::experiments;

namespace {

struct Common {
  std::string config;
  std::optional<std::int64_t> seed;
  std::string out = "out";
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "config file ([section] key = value)");
  cmd->add_option("--seed", c.seed, "run seed; for sweeps, replaces sweep.seeds with this one seed");
  cmd->add_option("--out", c.out, "output directory")->capture_default_str();
  cmd->add_option("--set", c.sets, "override, e.g. --set train.epochs=10");
}

RawConfig resolve(const Common& c, bool sweep) {
  RawConfig cfg = with_defaults(c.config.empty() ? RawConfig{} : load_config(c.config));
  for (const std::string& s : c.sets) {
    const auto dot = s.find('.');
    const auto eq = s.find('=');
    if (dot == std::string::npos || eq == std::string::npos || dot > eq) {
      throw ConfigError("--set expects section.key=value, got '" + s + "'");
    }
    set_value(cfg, s.substr(0, dot), s.substr(dot + 1, eq - dot - 1), s.substr(eq + 1));
  }
  if (c.seed) {
    set_value(cfg, "run", "seed", std::to_string(*c.seed));
    if (sweep) set_value(cfg, "sweep", "seeds", std::to_string(*c.seed));
  }
  fs::create_directories(c.out);
  return cfg;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw ConfigError("cannot write '" + p.string() + "'");
  out << text;
}

void save_records(const fs::path& dir, const std::vector<RunRecord>& records) {
  fs::create_directories(dir / "records");
  for (std::size_t i = 0; i < records.size(); ++i) {
    const RunRecord& r = records[i];
    save_record((dir / "records" / (std::to_string(i) + "_" + r.method + "_" + std::to_string(r.seed) + ".json")).string(), r);
  }
}

void finish_sweep(const Common& c, const std::string& name, const SweepResult& res) {
  const fs::path dir(c.out);
  write_csv((dir / (name + ".csv")).string(), res.table);
  save_records(dir, res.records);
  write_csv(std::cout, res.table);
}

void bias_scan(const Common& c) {
  const RawConfig cfg = resolve(c, false);
  const fs::path dir(c.out);
  const auto seed = static_cast<std::uint64_t>(get_int(cfg, "run", "seed"));
  const auto op = fuzzy::parse_operator(get_value(cfg, "train", "operator"));
  const std::string eps = get_value(cfg, "train", "epsilon");
  for (const std::string& t : std::vector<std::string>{"identity", "l2", "hinge:" + eps, "l2hinge:" + eps}) {
    const auto rows = bias_scatter(op, loss::NegLogBase2{}, loss::parse_transform(t), 2000, seed);
    std::string name = t.substr(0, t.find(':'));
    write_csv((dir / ("bias_scatter_" + name + ".csv")).string(), scatter_table(rows));
  }
  Table report{{"operator", "max_strict_delta", "biased_fraction_at_1", "confidence_monotonic_at_1"}, {}};
  for (const fuzzy::FuzzyOperator o : {fuzzy::FuzzyOperator{fuzzy::Reichenbach{}}, fuzzy::FuzzyOperator{fuzzy::Lukasiewicz{}},
                                       fuzzy::FuzzyOperator{fuzzy::Sigmoidal{}}}) {
    const auto bias = fuzzy::check_implication_biased(o, 200);
    const auto mono = fuzzy::check_confidence_monotonic(o, 1.0, 200);
    report.rows.push_back({fuzzy::to_string(o), format_double(bias.max_strict_delta), format_double(bias.fraction_at(1.0)),
                           mono.strict ? "true" : "false"});
    std::ofstream scan(dir / ("operator_scan_" + fuzzy::to_string(o).substr(0, fuzzy::to_string(o).find(':')) + ".csv"));
    fuzzy::write_scan_csv(scan, fuzzy::operator_scan(o, 50));
  }
  write_csv((dir / "bias_report.csv").string(), report);
  write_csv(std::cout, report);
}

void case_study(const Common& c) {
  RawConfig cfg = resolve(c, false);
  set_value(cfg, "run", "task", "case_study");
  const fs::path dir(c.out);
  Table summary{{"method", "seed", "initial_acc_colour", "acc_colour", "acc_shape", "blue_freq"}, {}};
  std::vector<RunRecord> records;
  for (const std::string& method : get_strings(cfg, "sweep", "methods")) {
    RawConfig run = cfg;
    set_value(run, "run", "method", method);
    const auto t0 = std::chrono::steady_clock::now();
    const RunOutcome o = run_experiment(run);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    records.push_back(make_record(run, o, wall));
    std::ofstream metrics(dir / ("case_study_" + method + "_metrics.csv"));
    learner::write_metrics_csv(metrics, o.model.spec(), o.history);
    if (!o.distribution.rows.empty()) {
      write_csv((dir / ("case_study_" + method + "_loss_distribution.csv")).string(), o.distribution);
    }
    const auto& f = o.final_metrics;
    summary.rows.push_back({method, std::to_string(o.seed), format_double(f.at("initial_acc_colour")),
                            format_double(f.at("acc_colour")), format_double(f.at("acc_shape")),
                            format_double(f.at("blue_freq"))});
    learner::save_checkpoint((dir / ("case_study_" + method + ".ckpt")).string(), o.model,
                             learner::config_hash(to_text(run)));
  }
  save_records(dir, records);
  write_csv((dir / "case_study.csv").string(), summary);
  write_csv(std::cout, summary);
}

int replay_cmd(const std::string& path) {
  const RunRecord r = load_record(path);
  const ReplayResult res = replay(r);
  for (const auto& d : res.differences) std::cout << "difference: " << d << '\n';
  std::cout << (res.identical ? "replay identical\n" : "replay differs\n");
  return res.identical ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Logic-loss training and implication-bias experiments"};
  app.require_subcommand(1);
  Common common;
  std::string record_path;

  auto* bias = app.add_subcommand("bias-scan", "loss/gradient scatter and operator bias report");
  auto* cs = app.add_subcommand("case-study", "four-cluster premise-negation experiment");
  auto* add = app.add_subcommand("add-sweep", "knowledge-base completeness sweep");
  auto* eps = app.add_subcommand("eps-sweep", "hinge threshold sensitivity sweep");
  auto* label = app.add_subcommand("label-sweep", "labelled-data size sweep");
  auto* clark = app.add_subcommand("clark-compare", "original vs biconditional knowledge base");
  auto* kb = app.add_subcommand("write-kb", "write the generated addition and hierarchy rule files");
  auto* rep = app.add_subcommand("replay", "re-run a run record and compare bit-for-bit");
  for (auto* cmd : {bias, cs, add, eps, label, clark, kb}) add_common(cmd, common);
  rep->add_option("record", record_path, "run record JSON")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (bias->parsed()) bias_scan(common);
    if (cs->parsed()) case_study(common);
    if (add->parsed()) finish_sweep(common, "completeness", run_completeness_sweep(resolve(common, true)));
    if (eps->parsed()) finish_sweep(common, "epsilon", run_epsilon_sweep(resolve(common, true)));
    if (label->parsed()) finish_sweep(common, "labelled", run_labelled_data_sweep(resolve(common, true)));
    if (clark->parsed()) finish_sweep(common, "clark", run_clark_comparison(resolve(common, true)));
    if (kb->parsed()) {
      const RawConfig cfg = resolve(common, false);
      HierarchySpec h;
      h.super_classes = static_cast<std::size_t>(get_int(cfg, "hierarchy", "super_classes"));
      h.sub_classes = static_cast<std::size_t>(get_int(cfg, "hierarchy", "sub_classes"));
      write_text(fs::path(common.out) / "addition.rules", logic::format_kb(addition_kb()));
      write_text(fs::path(common.out) / "hierarchy.rules", logic::format_kb(hierarchy_kb(h)));
    }
    if (rep->parsed()) return replay_cmd(record_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
