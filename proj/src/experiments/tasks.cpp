#include "rill/experiments/tasks.hpp"

#include "rill/errors.hpp"
#include "rill/experiments/datasets.hpp"
#include "rill/experiments/diagnostics.hpp"
#include "rill/experiments/idx.hpp"
#include "rill/learner/evaluate.hpp"
#include "rill/logic/parser.hpp"
#include "rill/logic/transforms.hpp"

namespace rill::experiments {
namespace {

// Independent streams derived from the run seed.
enum Stream : std::uint64_t { kData = 0, kInit, kLabels, kKb, kTest, kTrain };
std::uint64_t derive(std::uint64_t seed, Stream s) { return seed * 0x100000001b3ULL + 0x9e37 * (s + 1); }

std::size_t positive(const RawConfig& cfg, const char* section, const char* key) {
  const std::int64_t v = get_int(cfg, section, key);
  if (v <= 0) throw ConfigError(std::string(section) + "." + key + " must be positive");
  return static_cast<std::size_t>(v);
}

std::vector<std::vector<std::size_t>> singleton_groups(std::size_t n) {
  std::vector<std::vector<std::size_t>> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = {i};
  return g;
}

logic::KnowledgeBase apply_clark(const logic::KnowledgeBase& kb, const std::string& mode) {
  if (mode == "none") return kb;
  if (mode == "iff") return logic::clark_iff_transform(kb);
  if (mode == "grouped") return logic::clark_grouped_completion(kb);
  throw ConfigError("addition.clark must be none, iff or grouped, got '" + mode + "'");
}

}  // namespace

learner::PredicateMap case_study_predicates() {
  learner::PredicateMap map;
  for (std::size_t k = 0; k < 4; ++k) {
    map[kShapes[k]] = {0, k};
    map[kColours[k]] = {1, k};
  }
  return map;
}

RunOutcome run_case_study(const RawConfig& cfg, const std::string& method, std::uint64_t seed) {
  FourClusterSpec spec;
  spec.n_per_cluster = positive(cfg, "case_study", "n_per_cluster");
  spec.spread = get_double(cfg, "case_study", "spread");
  spec.train_fraction = get_double(cfg, "case_study", "train_fraction");
  const FourClusterData data = gen_four_cluster(spec, derive(seed, kData));

  RunOutcome out{"case_study", method, seed, {}, {}, {}, {}, {}};
  out.model = learner::MLP({2, hidden_widths(cfg), {{"shape", 4}, {"colour", 4}}}, derive(seed, kInit));
  const learner::EvalData test{data.test_x, {data.test_shape, data.test_colour}};

  // The starting model knows both attributes: it is fitted on the training
  // split with colour labels before the logic phase, which sees shapes only.
  learner::TrainConfig warm = train_config(cfg, "vanilla", derive(seed, kTrain));
  warm.epochs = positive(cfg, "case_study", "pretrain_epochs");
  learner::TaskData warm_data{data.train_x, {data.train_shape, data.train_colour}, {}, {}};
  learner::train(out.model, warm, {}, {}, warm_data);
  const learner::EvalReport before = learner::evaluate(out.model, test.features, test.labels);
  out.final_metrics["initial_acc_shape"] = before.heads[0].accuracy;
  out.final_metrics["initial_acc_colour"] = before.heads[1].accuracy;
  out.final_metrics["initial_blue_freq"] = before.heads[1].frequency[0];

  const logic::KnowledgeBase kb = logic::parse_kb(get_value(cfg, "case_study", "rule"));
  out.kb_text = logic::format_kb(kb);
  learner::TaskData logic_data{data.train_x,
                               {data.train_shape, std::vector<int>(data.train_shape.size(), -1)},
                               singleton_groups(data.train_shape.size()),
                               {"s"}};
  const learner::TrainConfig tc = train_config(cfg, method, derive(seed, kTrain) + 1);
  out.history = learner::train(out.model, tc, kb, case_study_predicates(), logic_data, &test);

  const learner::EvalReport after = learner::evaluate(out.model, test.features, test.labels);
  out.final_metrics["acc_shape"] = after.heads[0].accuracy;
  out.final_metrics["acc_colour"] = after.heads[1].accuracy;
  for (std::size_t k = 0; k < 4; ++k) {
    out.final_metrics["freq_" + kColours[k]] = after.heads[1].frequency[k];
  }
  out.final_metrics["blue_freq"] = after.heads[1].frequency[0];
  out.distribution = loss_distribution_table(loss_distribution_report(
      out.model, test.features, test.labels, kb.rules.front(), case_study_predicates(), tc.op, tc.g));
  return out;
}

RunOutcome run_addition(const RawConfig& cfg, const std::string& method, std::uint64_t seed) {
  const std::string& base = get_value(cfg, "addition", "base");
  const std::size_t n_groups = positive(cfg, "addition", "train_groups");
  AdditionGroups groups;
  LabelledSet test;
  if (base == "blobs") {
    BlobSpec blobs{10, positive(cfg, "addition", "dim"), get_double(cfg, "addition", "margin"),
                   get_double(cfg, "addition", "spread")};
    groups = gen_addition_groups(blobs, n_groups, derive(seed, kData));
    test = gen_blobs(blobs, positive(cfg, "addition", "test_per_class"), derive(seed, kTest));
  } else if (base == "mnist") {
    const LabelledSet pool = ingest_mnist_idx(get_value(cfg, "addition", "mnist_train_images"),
                                              get_value(cfg, "addition", "mnist_train_labels"));
    groups = gen_addition_groups(pool, n_groups, derive(seed, kData));
    test = ingest_mnist_idx(get_value(cfg, "addition", "mnist_test_images"),
                            get_value(cfg, "addition", "mnist_test_labels"));
  } else {
    throw ConfigError("addition.base must be 'blobs' or 'mnist', got '" + base + "'");
  }

  // Labels go to individual instances, chosen per class regardless of which
  // equation the instance sits in.
  std::vector<int> labels(groups.instances.size(), -1);
  const auto picked = stratified_pick(groups.instances.labels, 10,
                                      static_cast<std::size_t>(get_int(cfg, "addition", "labelled_per_class")),
                                      derive(seed, kLabels));
  for (std::size_t i : picked) labels[i] = groups.instances.labels[i];

  learner::TaskData data{groups.instances.features, {labels}, {}, {"s1", "s2", "s3", "s4"}};
  for (const auto& g : groups.groups) data.groups.push_back({g[0], g[1], g[2], g[3]});

  const double completeness = get_double(cfg, "addition", "completeness");
  const logic::KnowledgeBase kb = apply_clark(logic::sample_kb(addition_kb(), completeness, derive(seed, kKb)),
                                              get_value(cfg, "addition", "clark"));
  learner::PredicateMap map;
  for (int k = 0; k < 4; ++k) {
    for (int d = 0; d < 10; ++d) map[digit_predicate(k, d)] = {0, static_cast<std::size_t>(d)};
  }

  RunOutcome out{"addition", method, seed, {}, {}, logic::format_kb(kb), {}, {}};
  out.model = learner::MLP({data.features.cols(), hidden_widths(cfg), {{"digit", 10}}}, derive(seed, kInit));
  const learner::EvalData eval{test.features, {test.labels}};
  const learner::TrainConfig tc = train_config(cfg, method, derive(seed, kTrain));
  out.history = learner::train(out.model, tc, kb, map, data, &eval);
  const learner::EvalReport rep = learner::evaluate(out.model, eval.features, eval.labels);
  out.final_metrics["acc_digit"] = rep.heads[0].accuracy;
  out.final_metrics["kb_rules"] = static_cast<double>(kb.size());
  out.final_metrics["labelled"] = static_cast<double>(picked.size());
  return out;
}

RunOutcome run_hierarchy(const RawConfig& cfg, const std::string& method, std::uint64_t seed) {
  HierarchySpec spec;
  spec.super_classes = positive(cfg, "hierarchy", "super_classes");
  spec.sub_classes = positive(cfg, "hierarchy", "sub_classes");
  spec.dim = positive(cfg, "hierarchy", "dim");
  spec.super_margin = get_double(cfg, "hierarchy", "super_margin");
  spec.sub_margin = get_double(cfg, "hierarchy", "sub_margin");
  spec.spread = get_double(cfg, "hierarchy", "spread");
  const HierarchySet train = gen_hierarchy(spec, positive(cfg, "hierarchy", "train_per_class"), derive(seed, kData));
  const HierarchySet test = gen_hierarchy(spec, positive(cfg, "hierarchy", "test_per_class"), derive(seed, kTest));
  const std::size_t classes = spec.super_classes * spec.sub_classes;

  std::vector<int> sub(train.sub.size(), -1);
  for (std::size_t i : stratified_pick(train.sub, static_cast<int>(classes),
                                       positive(cfg, "hierarchy", "labelled_per_class"), derive(seed, kLabels))) {
    sub[i] = train.sub[i];
  }
  learner::TaskData data{train.features, {sub, train.super}, singleton_groups(train.sub.size()), {"s"}};
  const logic::KnowledgeBase kb = hierarchy_kb(spec);
  learner::PredicateMap map;
  for (std::size_t c = 0; c < classes; ++c) map["C_" + std::to_string(c)] = {0, c};
  for (std::size_t k = 0; k < spec.super_classes; ++k) map["SC_" + std::to_string(k)] = {1, k};

  RunOutcome out{"hierarchy", method, seed, {}, {}, logic::format_kb(kb), {}, {}};
  out.model = learner::MLP({spec.dim, hidden_widths(cfg), {{"sub", classes}, {"super", spec.super_classes}}},
                           derive(seed, kInit));
  const learner::EvalData eval{test.features, {test.sub, test.super}};
  out.history = learner::train(out.model, train_config(cfg, method, derive(seed, kTrain)), kb, map, data, &eval);
  const learner::EvalReport rep = learner::evaluate(out.model, eval.features, eval.labels);
  out.final_metrics["acc"] = rep.heads[0].accuracy;
  out.final_metrics["sc_acc"] = rep.heads[1].accuracy;
  return out;
}

RunOutcome run_experiment(const RawConfig& cfg) {
  const std::string& task = get_value(cfg, "run", "task");
  const std::string& method = get_value(cfg, "run", "method");
  const auto seed = static_cast<std::uint64_t>(get_int(cfg, "run", "seed"));
  if (task == "case_study") return run_case_study(cfg, method, seed);
  if (task == "addition") return run_addition(cfg, method, seed);
  if (task == "hierarchy") return run_hierarchy(cfg, method, seed);
  throw ConfigError("run.task must be case_study, addition or hierarchy, got '" + task + "'");
}

}  // namespace rill::experiments
