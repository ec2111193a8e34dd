#pragma once

#include "rill/fuzzy/valuation.hpp"
#include "rill/logic/formula.hpp"

namespace rill::loss {

inline constexpr std::size_t kMaxSemanticAtoms = 20;

/// Weighted model count of `f`: the sum over satisfying truth assignments
/// of prod(p) over true atoms times prod(1 - p) over false ones, computed
/// by exhaustive enumeration. Quantifiers are grounded over the
/// valuation's domain first. Differentiable in the atom probabilities.
/// Throws DomainError beyond kMaxSemanticAtoms distinct atoms.
Var weighted_model_count(const logic::Formula& f, const fuzzy::Valuation& probs);

/// -ln(WMC). Throws DomainError when the count is 0 (the formula has no
/// model with non-zero weight, e.g. a contradiction).
Var semantic_loss_bruteforce(const logic::Formula& f, const fuzzy::Valuation& probs);

/// True when some two-valued assignment satisfies the quantifier-free `f`.
bool satisfiable(const logic::Formula& f);

}  // namespace rill::loss
