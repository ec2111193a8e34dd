#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rill/logic/formula.hpp"

namespace rill::logic {

/// Rewrites into {not, implies} plus quantifiers:
///   p & q   => !(p -> !q)
///   p | q   => !p -> q
///   p <-> q => !((p -> q) -> !(q -> p))
Formula normalize_core(const Formula& f);

/// Replaces each rule's top-level implication under its quantifier prefix
/// with a biconditional. Throws ShapeError if a matrix is not an implication.
KnowledgeBase clark_iff_transform(const KnowledgeBase& kb);

/// Groups implications by head atom (positional unification of head
/// arguments) and emits one `head <-> body1 | body2 | ...` per group, in
/// order of first appearance. Throws ShapeError for non-atomic heads.
KnowledgeBase clark_grouped_completion(const KnowledgeBase& kb);

/// Keeps ceil(completeness * |rules|) rules chosen uniformly without
/// replacement, in their original order. Deterministic per seed.
KnowledgeBase sample_kb(const KnowledgeBase& kb, double completeness, std::uint64_t seed);

/// Constants each variable ranges over.
using Domain = std::map<std::string, std::vector<std::string>>;

/// Classical grounding: forall becomes a conjunction and exists a
/// disjunction over the variable's domain. The result is quantifier-free.
Formula ground_formula(const Formula& f, const Domain& domain);

/// Substitutes constants for free variables.
Formula substitute(const Formula& f, const std::map<std::string, std::string>& binding);

}  // namespace rill::logic
