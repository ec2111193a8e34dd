#pragma once

#include <map>
#include <string>
#include <vector>

#include "rill/autodiff/tape.hpp"
#include "rill/fuzzy/valuation.hpp"
#include "rill/logic/formula.hpp"

namespace rill::learner {

/// Instances plus the structure the logic term needs.
///
/// labels[h][i] is the class of instance i for head h, or -1 when that
/// label is withheld. groups[g][k] is the instance filling slot k of group
/// g; slots[k] is the constant the slot is named by in ground atoms.
struct TaskData {
  Matrix features;
  std::vector<std::vector<int>> labels;
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::string> slots;

  std::size_t size() const { return features.rows(); }
  /// Throws ShapeError on inconsistent sizes or out-of-range indices.
  void validate(std::size_t heads) const;
  /// Indices with a label for head `h`.
  std::vector<std::size_t> labelled(std::size_t h) const;
};

/// Predicate name -> (head, class).
struct PredicateTarget {
  std::size_t head = 0;
  std::size_t cls = 0;
  bool operator==(const PredicateTarget&) const = default;
};
using PredicateMap = std::map<std::string, PredicateTarget>;

/// Binds each rule's quantifier prefix positionally to the slot constants:
/// the i-th quantified variable becomes slots[i]. The result is
/// quantifier-free; the universal average over samples is taken by the
/// risk across batch rows. Throws ConfigError if a rule quantifies more
/// variables than there are slots.
logic::KnowledgeBase ground_by_slots(const logic::KnowledgeBase& kb, const std::vector<std::string>& slots);

/// dict(f(x)): G(P(slot)) is column `cls` of the probabilities of head
/// `head` for that slot. slot_probs[k][h] holds the n x classes softmax rows
/// of slot k. Only `atoms` are populated. Throws UnmappedPredicateError for
/// a predicate without a mapping and ShapeError for a non-slot argument.
fuzzy::Valuation valuation_from_outputs(const std::vector<std::vector<Var>>& slot_probs,
                                        const PredicateMap& map, const std::vector<std::string>& slots,
                                        const std::vector<logic::Atom>& atoms);

/// Distinct atoms over all rules, in first-occurrence order.
std::vector<logic::Atom> atoms_of(const logic::KnowledgeBase& kb);

}  // namespace rill::learner
