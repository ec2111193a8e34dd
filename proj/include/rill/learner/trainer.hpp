#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "rill/fuzzy/operator.hpp"
#include "rill/learner/mlp.hpp"
#include "rill/learner/optimizer.hpp"
#include "rill/learner/schedule.hpp"
#include "rill/learner/task_data.hpp"
#include "rill/loss/logic_loss.hpp"

namespace rill::learner {

enum class LogicMode { Fuzzy, Semantic };

struct TrainConfig {
  std::size_t epochs = 30;
  std::size_t batch_size = 32;      // groups per logic minibatch
  /// Labelled instances per head per step, cycled through each head's
  /// labelled pool. 0 takes the labelled instances that occur inside the
  /// step's groups instead, so labels are seen at their natural rate.
  std::size_t labelled_batch = 32;
  std::uint64_t seed = 2020;
  double lambda = 0.7;
  LogicMode logic = LogicMode::Fuzzy;
  fuzzy::FuzzyOperator op = fuzzy::Reichenbach{};
  loss::OuterMap g = loss::NegLogBase2{};
  loss::LossTransform transform = loss::Identity{};
  OptimizerSpec optimizer = AdamW{};
  ScheduleSpec schedule = StepDecay{};
};

struct EvalData {
  Matrix features;
  std::vector<std::vector<int>> labels;
};

struct EpochMetrics {
  int epoch = 0;
  double lr = 0.0;
  double task_loss = 0.0;   // mean over steps of the summed per-head cross-entropy
  double logic_loss = 0.0;  // mean over steps of the (transformed) logic risk
  std::vector<double> accuracy;                // per head, on the evaluation set
  std::vector<std::vector<double>> frequency;  // per head, predicted-class shares
};

using EpochCallback = std::function<void(const EpochMetrics&)>;

/// Minimises task + lambda * logic with minibatches. One epoch is one pass
/// over the groups (or over the largest labelled pool when there are no
/// groups). The task term is cross-entropy on labelled instances only; the
/// logic term covers every grouped instance, labelled or not. Updates
/// `model` in place and is deterministic for a given config.seed.
/// Throws DivergenceError when a loss or value turns non-finite.
std::vector<EpochMetrics> train(MLP& model, const TrainConfig& config, const logic::KnowledgeBase& kb,
                                const PredicateMap& map, const TaskData& data, const EvalData* eval = nullptr,
                                const EpochCallback& on_epoch = {});

/// Logic risk of `model` over every group of `data`, with config's operator,
/// transform and mode. Returns 0 for an empty KB or no groups.
double full_logic_risk(const MLP& model, const TrainConfig& config, const logic::KnowledgeBase& kb,
                       const PredicateMap& map, const TaskData& data);

/// Sum over heads of mean cross-entropy on the labelled instances of `data`.
double full_task_loss(const MLP& model, const TaskData& data);

/// epoch,lr,task_loss,logic_loss,acc_<head>...,freq_<head>_<c>...
void write_metrics_csv(std::ostream& out, const MLPSpec& spec, const std::vector<EpochMetrics>& history);

}  // namespace rill::learner
