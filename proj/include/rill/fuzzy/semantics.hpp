#pragma once

#include "rill/fuzzy/operator.hpp"
#include "rill/fuzzy/valuation.hpp"
#include "rill/logic/formula.hpp"

namespace rill::fuzzy {

/// Degree of satisfaction s(f, v):
///   atom      -> v(atom)
///   !g        -> 1 - s(g)
///   g -> h    -> I(s(g), s(h))
///   forall x  -> mean over the constants in v.domain()[x]
///   exists x  -> min over the constants in v.domain()[x]
/// Formulas outside the {!, ->} core are normalised first. Throws
/// MissingAtomError when a ground atom has no value.
Var logic_likelihood(const FuzzyOperator& op, const logic::Formula& f, const Valuation& v);

}  // namespace rill::fuzzy
