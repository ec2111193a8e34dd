#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace rill::logic {

struct Term {
  enum class Kind { Variable, Constant };
  Kind kind = Kind::Constant;
  std::string name;

  static Term variable(std::string n) { return {Kind::Variable, std::move(n)}; }
  static Term constant(std::string n) { return {Kind::Constant, std::move(n)}; }
  bool is_variable() const { return kind == Kind::Variable; }
  bool operator==(const Term&) const = default;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;
  bool operator==(const Atom&) const = default;
};

class Formula;

struct AtomRef;
struct Not;
struct Implies;
struct And;
struct Or;
struct Iff;
struct Forall;
struct Exists;

/// Immutable first-order formula. Subtrees are shared between copies, so
/// passing Formulas by value is cheap and they are safe to read from many
/// threads at once.
class Formula {
 public:
  using Node = std::variant<AtomRef, Not, Implies, And, Or, Iff, Forall, Exists>;

  static Formula atom(Atom a);
  static Formula atom(std::string predicate, std::vector<Term> args = {});
  static Formula negate(Formula f);
  static Formula implies(Formula lhs, Formula rhs);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula iff(Formula lhs, Formula rhs);
  static Formula forall(std::string var, Formula body);
  static Formula exists(std::string var, Formula body);

  const Node& node() const;

  template <class T>
  const T* as() const;
  template <class T>
  bool is() const;

  /// Structural equality.
  bool operator==(const Formula& other) const;

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct AtomRef {
  Atom atom;
};
struct Not {
  Formula body;
};
struct Implies {
  Formula lhs, rhs;
};
struct And {
  Formula lhs, rhs;
};
struct Or {
  Formula lhs, rhs;
};
struct Iff {
  Formula lhs, rhs;
};
struct Forall {
  std::string var;
  Formula body;
};
struct Exists {
  std::string var;
  Formula body;
};

inline const Formula::Node& Formula::node() const { return *node_; }

template <class T>
const T* Formula::as() const {
  return std::get_if<T>(node_.get());
}
template <class T>
bool Formula::is() const {
  return std::holds_alternative<T>(*node_);
}

/// Predicate name to arity.
using Signature = std::map<std::string, std::size_t>;

struct KnowledgeBase {
  std::vector<Formula> rules;
  Signature signature;

  std::size_t size() const { return rules.size(); }
  bool empty() const { return rules.empty(); }
};

/// Renders in the rule DSL with the minimum parentheses needed to parse back
/// to the same tree. Consecutive quantifiers of one kind share a keyword.
std::string format_rule(const Formula& f);
std::string format_kb(const KnowledgeBase& kb);

/// True when only AtomRef, Not, Implies, Forall and Exists occur.
bool is_core(const Formula& f);

/// Leading quantifier prefix and the matrix under it.
struct Prefix {
  struct Binder {
    bool universal;
    std::string var;
  };
  std::vector<Binder> binders;
  Formula matrix;
};
Prefix split_prefix(const Formula& f);
Formula with_prefix(const std::vector<Prefix::Binder>& binders, Formula matrix);

/// Every atom occurring in `f`, in first-occurrence order, without duplicates.
std::vector<Atom> atoms_of(const Formula& f);

/// Free variables of `f`.
std::vector<std::string> free_variables(const Formula& f);

/// Replace variable occurrences according to `mapping` (quantifier binders
/// are renamed too).
Formula rename_variables(const Formula& f, const std::map<std::string, std::string>& mapping);

/// Two-valued truth of a quantifier-free formula under `truth(atom)`.
template <class Truth>
bool evaluate_classical(const Formula& f, const Truth& truth);

/// Adds the atoms of `f` to `sig`; throws ArityError on a clash.
void extend_signature(Signature& sig, const Formula& f);

std::string to_string(const Atom& a);

}  // namespace rill::logic

#include "rill/logic/formula_impl.hpp"
