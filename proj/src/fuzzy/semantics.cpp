#include "rill/fuzzy/semantics.hpp"

#include <map>

#include "rill/autodiff/ops.hpp"
#include "rill/errors.hpp"
#include "rill/logic/transforms.hpp"

namespace rill::fuzzy {
namespace {

using Env = std::map<std::string, std::string>;

class Evaluator {
 public:
  Evaluator(const FuzzyOperator& op, const Valuation& v) : op_(op), v_(v) {}

  Var eval(const logic::Formula& f, Env& env) {
    using namespace logic;
    if (const auto* a = f.as<AtomRef>()) return atom(a->atom, env);
    if (const auto* n = f.as<Not>()) return ad::one_minus(eval(n->body, env));
    if (const auto* i = f.as<Implies>()) {
      const Var lhs = eval(i->lhs, env);
      const Var rhs = eval(i->rhs, env);
      return implication_likelihood(op_, lhs, rhs);
    }
    if (const auto* q = f.as<Forall>()) return quantified(q->var, q->body, env, true);
    if (const auto* q = f.as<Exists>()) return quantified(q->var, q->body, env, false);
    throw ShapeError("formula is not in {!, ->} core form");
  }

 private:
  Var atom(const logic::Atom& a, const Env& env) {
    logic::Atom g = a;
    for (auto& t : g.args) {
      if (!t.is_variable()) continue;
      auto it = env.find(t.name);
      if (it == env.end()) throw MissingAtomError("unbound variable " + t.name + " in " + logic::to_string(a));
      t = logic::Term::constant(it->second);
    }
    return v_.at(g);
  }

  Var quantified(const std::string& var, const logic::Formula& body, Env& env, bool universal) {
    auto it = v_.domain().find(var);
    if (it == v_.domain().end() || it->second.empty()) {
      throw MissingAtomError("no grounding domain for variable " + var);
    }
    std::vector<Var> parts;
    parts.reserve(it->second.size());
    for (const auto& c : it->second) {
      env[var] = c;
      parts.push_back(eval(body, env));
    }
    env.erase(var);
    return universal ? ad::mean_of(parts) : ad::min_of(parts);
  }

  const FuzzyOperator& op_;
  const Valuation& v_;
};

}  // namespace

Var logic_likelihood(const FuzzyOperator& op, const logic::Formula& f, const Valuation& v) {
  Evaluator ev(op, v);
  Env env;
  if (logic::is_core(f)) return ev.eval(f, env);
  return ev.eval(logic::normalize_core(f), env);
}

}  // namespace rill::fuzzy
