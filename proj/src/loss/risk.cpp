#include "rill/loss/risk.hpp"

#include <cmath>

#include "rill/autodiff/ops.hpp"
#include "rill/errors.hpp"
#include "rill/loss/semantic_loss.hpp"

namespace rill::loss {
namespace {

template <class PerRule>
Var averaged(const logic::KnowledgeBase& kb, std::span<const fuzzy::Valuation> batch, PerRule per_rule) {
  if (batch.empty()) throw ConfigError("empirical risk needs a non-empty batch");
  if (kb.rules.empty()) throw ConfigError("empirical risk needs a non-empty knowledge base");
  Var total;
  std::size_t count = 0;
  for (const fuzzy::Valuation& v : batch) {
    for (const logic::Formula& r : kb.rules) {
      const Var l = ad::sum(per_rule(r, v));
      total = total.valid() ? ad::add(total, l) : l;
      count += std::max<std::size_t>(v.batch_rows(), 1);
    }
  }
  // count is per rule; the divisor is samples times rules.
  return ad::affine(total, 1.0 / static_cast<double>(count), 0.0);
}

}  // namespace

Var empirical_logic_risk(const fuzzy::FuzzyOperator& op, const OuterMap& g, const LossTransform& t,
                         const logic::KnowledgeBase& kb, std::span<const fuzzy::Valuation> batch) {
  return averaged(kb, batch, [&](const logic::Formula& r, const fuzzy::Valuation& v) {
    return rill(t, logic_loss(op, g, r, v));
  });
}

Var empirical_semantic_risk(const logic::KnowledgeBase& kb, std::span<const fuzzy::Valuation> batch) {
  return averaged(kb, batch, [](const logic::Formula& r, const fuzzy::Valuation& v) {
    return semantic_loss_bruteforce(r, v);
  });
}

Var combined_objective(const Var& task_risk, const Var& logic_risk, const RiskWeights& w) {
  if (!(w.lambda >= 0.0) || !std::isfinite(w.lambda)) throw ConfigError("lambda must be a finite non-negative number");
  if (w.lambda == 0.0) return ad::add(task_risk, ad::affine(logic_risk, 0.0, 0.0));
  return ad::add(task_risk, ad::affine(logic_risk, w.lambda, 0.0));
}

}  // namespace rill::loss
