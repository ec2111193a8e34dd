#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "rill/autodiff/tape.hpp"
#include "rill/logic/formula.hpp"
#include "rill/logic/transforms.hpp"

namespace rill::fuzzy {

/// Ground atoms mapped to differentiable truth degrees in [0, 1], plus the
/// constants each quantified variable ranges over.
///
/// All values share one shape: either 1x1, or an n x 1 column holding the
/// same atom for n samples at once. Evaluation is elementwise, so a column
/// valuation evaluates a formula for a whole batch in one pass.
class Valuation {
 public:
  /// Throws DomainError if the atom has variables or a value leaves [0, 1].
  void set(const logic::Atom& ground_atom, const Var& value);
  void set(const std::string& predicate, const std::vector<std::string>& constants, const Var& value);

  /// Throws MissingAtomError if the atom has no value.
  const Var& at(const logic::Atom& ground_atom) const;
  const Var* find(const logic::Atom& ground_atom) const;
  bool contains(const logic::Atom& ground_atom) const { return find(ground_atom) != nullptr; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  /// Rows per value (1 for scalar valuations, 0 when empty).
  std::size_t batch_rows() const { return rows_; }

  void set_domain(const std::string& var, std::vector<std::string> constants);
  const logic::Domain& domain() const { return domain_; }

  static std::string key(const logic::Atom& ground_atom);

 private:
  std::unordered_map<std::string, Var> values_;
  logic::Domain domain_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
};

}  // namespace rill::fuzzy
