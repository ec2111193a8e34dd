#pragma once

#include <cstdint>
#include <vector>

#include "rill/experiments/csv.hpp"
#include "rill/learner/mlp.hpp"
#include "rill/learner/task_data.hpp"
#include "rill/loss/logic_loss.hpp"

namespace rill::experiments {

struct ScatterRow {
  double p = 0.0;       // G(p)
  double q = 0.0;       // G(q)
  double loss = 0.0;    // transformed loss of p -> q
  double grad_p = 0.0;  // |d loss / d G(p)|
};

/// Draws G(p), G(q) ~ U(0, 1) n times and evaluates the transformed loss of
/// p -> q and its premise gradient. Reproducible per seed.
std::vector<ScatterRow> bias_scatter(const fuzzy::FuzzyOperator& op, const loss::OuterMap& g,
                                     const loss::LossTransform& t, std::size_t n, std::uint64_t seed);
Table scatter_table(const std::vector<ScatterRow>& rows);

struct LossSample {
  std::size_t index = 0;
  double loss = 0.0;
  bool relevant = false;
};

/// Per-instance logic loss g(s(rule)) of a single-variable rule, tagged
/// relevant when the true labels make its premise or its consequent hold.
/// labels[h][i] gives the ground truth used for relevance.
std::vector<LossSample> loss_distribution_report(const learner::MLP& model, const Matrix& features,
                                                 const std::vector<std::vector<int>>& labels,
                                                 const logic::Formula& rule, const learner::PredicateMap& map,
                                                 const fuzzy::FuzzyOperator& op, const loss::OuterMap& g);
Table loss_distribution_table(const std::vector<LossSample>& samples);

}  // namespace rill::experiments
