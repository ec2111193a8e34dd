#include "rill/learner/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>

#include "rill/autodiff/ops.hpp"
#include "rill/errors.hpp"
#include "rill/learner/evaluate.hpp"
#include "rill/loss/risk.hpp"

namespace rill::learner {
namespace {

struct StepBatch {
  std::vector<std::size_t> groups;
  std::vector<std::vector<std::size_t>> labelled;  // per head
};

// Forward over the stacked rows of a logic batch and labelled minibatches.
struct StepResult {
  Var task;
  Var logic;
  bool has_logic = false;
};

Matrix gather_rows(const Matrix& x, const std::vector<std::size_t>& rows) {
  Matrix out(rows.size(), x.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy(x.row(rows[r]).begin(), x.row(rows[r]).end(), out.row(r).begin());
  }
  return out;
}

StepResult forward_step(Tape& tape, std::span<const Var> params, const MLP& model, const TrainConfig& cfg,
                        const logic::KnowledgeBase& grounded, const std::vector<logic::Atom>& atoms,
                        const PredicateMap& map, const TaskData& data, const StepBatch& batch) {
  const std::size_t heads = model.spec().heads.size();
  const std::size_t n_slots = data.slots.size();
  const std::size_t bg = batch.groups.size();
  std::vector<std::size_t> rows;
  for (std::size_t k = 0; k < n_slots; ++k) {
    for (std::size_t g : batch.groups) rows.push_back(data.groups[g][k]);
  }
  const std::size_t logic_rows = rows.size();
  for (std::size_t h = 0; h < heads; ++h) rows.insert(rows.end(), batch.labelled[h].begin(), batch.labelled[h].end());
  if (rows.empty()) throw ConfigError("training step has neither groups nor labelled instances");

  const MLP::Output out = model.forward(params, tape.constant(gather_rows(data.features, rows)));
  StepResult res;
  res.task = tape.constant(0.0);
  std::size_t offset = logic_rows;
  for (std::size_t h = 0; h < heads; ++h) {
    const std::size_t n = batch.labelled[h].size();
    if (n == 0) continue;
    std::vector<int> y;
    for (std::size_t i : batch.labelled[h]) y.push_back(data.labels[h][i]);
    res.task = ad::add(res.task, ad::cross_entropy_rows(ad::slice_rows(out.logits[h], offset, n), y));
    offset += n;
  }
  if (bg > 0 && !grounded.empty()) {
    std::vector<std::vector<Var>> slot_probs(n_slots);
    for (std::size_t k = 0; k < n_slots; ++k) {
      for (std::size_t h = 0; h < heads; ++h) slot_probs[k].push_back(ad::slice_rows(out.probs[h], k * bg, bg));
    }
    const fuzzy::Valuation v = valuation_from_outputs(slot_probs, map, data.slots, atoms);
    std::span<const fuzzy::Valuation> vs(&v, 1);
    res.logic = cfg.logic == LogicMode::Semantic ? loss::empirical_semantic_risk(grounded, vs)
                                                 : loss::empirical_logic_risk(cfg.op, cfg.g, cfg.transform, grounded, vs);
    res.has_logic = true;
  }
  return res;
}

// Cycles through a shuffled pool, reshuffling at every wrap.
class PoolCursor {
 public:
  PoolCursor(std::vector<std::size_t> pool, std::mt19937_64& rng) : pool_(std::move(pool)), rng_(rng) {
    std::shuffle(pool_.begin(), pool_.end(), rng_);
  }
  std::vector<std::size_t> take(std::size_t n) {
    std::vector<std::size_t> out;
    if (pool_.empty()) return out;
    n = std::min(n, pool_.size());
    while (out.size() < n) {
      if (pos_ == pool_.size()) {
        std::shuffle(pool_.begin(), pool_.end(), rng_);
        pos_ = 0;
      }
      out.push_back(pool_[pos_++]);
    }
    return out;
  }
  std::size_t size() const { return pool_.size(); }

 private:
  std::vector<std::size_t> pool_;
  std::mt19937_64& rng_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<EpochMetrics> train(MLP& model, const TrainConfig& cfg, const logic::KnowledgeBase& kb,
                                const PredicateMap& map, const TaskData& data, const EvalData* eval,
                                const EpochCallback& on_epoch) {
  const std::size_t heads = model.spec().heads.size();
  data.validate(heads);
  if (cfg.batch_size == 0) throw ConfigError("batch size must be positive");
  if (cfg.lambda < 0.0) throw ConfigError("lambda must be non-negative");
  validate(cfg.optimizer);
  validate(cfg.schedule);

  const logic::KnowledgeBase grounded = ground_by_slots(kb, data.slots);
  const std::vector<logic::Atom> atoms = atoms_of(grounded);
  const bool use_groups = !grounded.empty() && !data.groups.empty();
  // Without groups there is nothing to draw labels from, so fall back to
  // cycling the labelled pools in chunks of batch_size.
  const bool in_batch = cfg.labelled_batch == 0 && use_groups;
  const std::size_t pool_batch = cfg.labelled_batch == 0 ? cfg.batch_size : cfg.labelled_batch;

  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<PoolCursor> pools;
  std::size_t largest_pool = 0;
  for (std::size_t h = 0; h < heads; ++h) {
    pools.emplace_back(data.labelled(h), rng);
    largest_pool = std::max(largest_pool, pools.back().size());
  }
  std::vector<std::size_t> order(data.groups.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  const std::size_t steps = use_groups ? (order.size() + cfg.batch_size - 1) / cfg.batch_size
                                       : std::max<std::size_t>(1, (largest_pool + pool_batch - 1) / pool_batch);
  Optimizer opt(cfg.optimizer);
  const loss::RiskWeights weights{cfg.lambda};
  std::vector<EpochMetrics> history;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = learning_rate(cfg.schedule, base_lr(cfg.optimizer), static_cast<int>(epoch));
    if (use_groups) std::shuffle(order.begin(), order.end(), rng);
    double task_sum = 0.0, logic_sum = 0.0;
    for (std::size_t s = 0; s < steps; ++s) {
      StepBatch batch;
      if (use_groups) {
        const std::size_t begin = s * cfg.batch_size;
        const std::size_t end = std::min(order.size(), begin + cfg.batch_size);
        batch.groups.assign(order.begin() + static_cast<std::ptrdiff_t>(begin),
                            order.begin() + static_cast<std::ptrdiff_t>(end));
      }
      if (in_batch) {
        batch.labelled.assign(heads, {});
        for (std::size_t g : batch.groups) {
          for (std::size_t i : data.groups[g]) {
            for (std::size_t h = 0; h < heads; ++h) {
              if (data.labels[h][i] >= 0) batch.labelled[h].push_back(i);
            }
          }
        }
      } else {
        for (auto& p : pools) batch.labelled.push_back(p.take(pool_batch));
      }

      Tape tape;
      const std::vector<Var> params = model.bind(tape);
      std::vector<Matrix> grads;
      try {
        const StepResult r = forward_step(tape, params, model, cfg, grounded, atoms, map, data, batch);
        const Var logic = r.has_logic ? r.logic : tape.constant(0.0);
        const Var objective = loss::combined_objective(r.task, logic, weights);
        const Gradients g = tape.backward(objective);
        for (const Var& p : params) grads.push_back(g.of(p));
        task_sum += r.task.item();
        logic_sum += logic.item();
      } catch (const DomainError& e) {
        throw DivergenceError("epoch " + std::to_string(epoch) + ": " + e.what());
      }
      for (const Matrix& g : grads) {
        if (!g.all_finite()) throw DivergenceError("epoch " + std::to_string(epoch) + ": non-finite gradient");
      }
      opt.step(model.parameters(), grads, lr);
    }

    EpochMetrics m;
    m.epoch = static_cast<int>(epoch);
    m.lr = lr;
    m.task_loss = task_sum / static_cast<double>(steps);
    m.logic_loss = logic_sum / static_cast<double>(steps);
    if (!std::isfinite(m.task_loss) || !std::isfinite(m.logic_loss)) {
      throw DivergenceError("epoch " + std::to_string(epoch) + ": loss is not finite");
    }
    if (eval != nullptr) {
      const EvalReport rep = evaluate(model, eval->features, eval->labels);
      for (const HeadReport& h : rep.heads) {
        m.accuracy.push_back(h.accuracy);
        m.frequency.push_back(h.frequency);
      }
    }
    if (on_epoch) on_epoch(m);
    history.push_back(std::move(m));
  }
  return history;
}

double full_logic_risk(const MLP& model, const TrainConfig& cfg, const logic::KnowledgeBase& kb,
                       const PredicateMap& map, const TaskData& data) {
  const logic::KnowledgeBase grounded = ground_by_slots(kb, data.slots);
  if (grounded.empty() || data.groups.empty()) return 0.0;
  StepBatch batch;
  for (std::size_t g = 0; g < data.groups.size(); ++g) batch.groups.push_back(g);
  batch.labelled.resize(model.spec().heads.size());
  Tape tape;
  std::vector<Var> params;
  for (const Matrix* m : model.parameters()) params.push_back(tape.constant(*m));
  return forward_step(tape, params, model, cfg, grounded, atoms_of(grounded), map, data, batch).logic.item();
}

double full_task_loss(const MLP& model, const TaskData& data) {
  Tape tape;
  std::vector<Var> params;
  for (const Matrix* m : model.parameters()) params.push_back(tape.constant(*m));
  const MLP::Output out = model.forward(params, tape.constant(data.features));
  double total = 0.0;
  for (std::size_t h = 0; h < out.logits.size(); ++h) total += ad::cross_entropy_rows(out.logits[h], data.labels.at(h)).item();
  return total;
}

void write_metrics_csv(std::ostream& out, const MLPSpec& spec, const std::vector<EpochMetrics>& history) {
  out << "epoch,lr,task_loss,logic_loss";
  for (const HeadSpec& h : spec.heads) out << ",acc_" << h.name;
  for (const HeadSpec& h : spec.heads) {
    for (std::size_t c = 0; c < h.classes; ++c) out << ",freq_" << h.name << '_' << c;
  }
  out << '\n' << std::setprecision(17);
  for (const EpochMetrics& m : history) {
    out << m.epoch << ',' << m.lr << ',' << m.task_loss << ',' << m.logic_loss;
    for (double a : m.accuracy) out << ',' << a;
    for (const auto& f : m.frequency) {
      for (double x : f) out << ',' << x;
    }
    out << '\n';
  }
}

}  // namespace rill::learner
