#pragma once

#include <span>

#include "rill/logic/formula.hpp"
#include "rill/loss/logic_loss.hpp"

namespace rill::loss {

struct RiskWeights {
  double lambda = 0.7;
};

/// Mean over every sample row of every valuation and every rule of
/// rill(t, g(s(r, v))). Column valuations contribute one sample per row.
/// Throws ConfigError on an empty batch or KB.
Var empirical_logic_risk(const fuzzy::FuzzyOperator& op, const OuterMap& g, const LossTransform& t,
                         const logic::KnowledgeBase& kb, std::span<const fuzzy::Valuation> batch);

/// Same averaging with the enumeration semantic loss in place of the fuzzy loss.
Var empirical_semantic_risk(const logic::KnowledgeBase& kb, std::span<const fuzzy::Valuation> batch);

/// task + lambda * logic. Throws ConfigError when lambda < 0.
Var combined_objective(const Var& task_risk, const Var& logic_risk, const RiskWeights& w);

}  // namespace rill::loss
