#include "rill/logic/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <set>

#include "rill/errors.hpp"

namespace rill::logic {

Formula normalize_core(const Formula& f) {
  return std::visit(
      [](const auto& n) -> Formula {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, AtomRef>) {
          return Formula::atom(n.atom);
        } else if constexpr (std::is_same_v<T, Not>) {
          return Formula::negate(normalize_core(n.body));
        } else if constexpr (std::is_same_v<T, Forall>) {
          return Formula::forall(n.var, normalize_core(n.body));
        } else if constexpr (std::is_same_v<T, Exists>) {
          return Formula::exists(n.var, normalize_core(n.body));
        } else {
          Formula p = normalize_core(n.lhs);
          Formula q = normalize_core(n.rhs);
          if constexpr (std::is_same_v<T, Implies>) {
            return Formula::implies(p, q);
          } else if constexpr (std::is_same_v<T, And>) {
            return Formula::negate(Formula::implies(p, Formula::negate(q)));
          } else if constexpr (std::is_same_v<T, Or>) {
            return Formula::implies(Formula::negate(p), q);
          } else {
            return Formula::negate(
                Formula::implies(Formula::implies(p, q), Formula::negate(Formula::implies(q, p))));
          }
        }
      },
      f.node());
}

KnowledgeBase clark_iff_transform(const KnowledgeBase& kb) {
  KnowledgeBase out;
  out.signature = kb.signature;
  for (const Formula& rule : kb.rules) {
    Prefix p = split_prefix(rule);
    const auto* imp = p.matrix.as<Implies>();
    if (!imp) throw ShapeError("rule is not an implication: " + format_rule(rule));
    out.rules.push_back(with_prefix(p.binders, Formula::iff(imp->lhs, imp->rhs)));
  }
  return out;
}

namespace {

std::string head_key(const Atom& head) {
  std::string key = head.predicate + "/" + std::to_string(head.args.size());
  std::vector<std::string> seen;
  for (const Term& t : head.args) {
    if (t.is_variable()) {
      auto it = std::find(seen.begin(), seen.end(), t.name);
      if (it == seen.end()) {
        key += "|v" + std::to_string(seen.size());
        seen.push_back(t.name);
      } else {
        key += "|v" + std::to_string(it - seen.begin());
      }
    } else {
      key += "|c:" + t.name;
    }
  }
  return key;
}

struct Group {
  Atom head;
  std::vector<Prefix::Binder> binders;
  std::vector<Formula> bodies;
  std::set<std::string> used;
};

}  // namespace

KnowledgeBase clark_grouped_completion(const KnowledgeBase& kb) {
  std::vector<std::string> order;
  std::map<std::string, Group> groups;

  for (const Formula& rule : kb.rules) {
    Prefix p = split_prefix(rule);
    const auto* imp = p.matrix.as<Implies>();
    if (!imp) throw ShapeError("rule is not an implication: " + format_rule(rule));
    const auto* head = imp->rhs.as<AtomRef>();
    if (!head) throw ShapeError("rule head is not an atom: " + format_rule(rule));

    const std::string key = head_key(head->atom);
    auto [it, fresh] = groups.try_emplace(key);
    Group& g = it->second;
    std::map<std::string, std::string> rename;
    if (fresh) {
      order.push_back(key);
      g.head = head->atom;
      for (const Term& t : g.head.args) {
        if (t.is_variable()) g.used.insert(t.name);
      }
    } else {
      for (std::size_t i = 0; i < g.head.args.size(); ++i) {
        if (head->atom.args[i].is_variable()) {
          rename[head->atom.args[i].name] = g.head.args[i].name;
        }
      }
    }
    // Body-only variables must not collide with names already in the group.
    for (const auto& b : p.binders) {
      if (rename.count(b.var)) continue;
      const bool in_head = std::any_of(head->atom.args.begin(), head->atom.args.end(),
                                       [&](const Term& t) { return t.is_variable() && t.name == b.var; });
      if (in_head && fresh) continue;
      std::string name = b.var;
      for (int k = 1; g.used.count(name); ++k) name = b.var + "_" + std::to_string(k);
      rename[b.var] = name;
      g.used.insert(name);
    }
    for (const auto& b : p.binders) {
      const std::string name = rename.count(b.var) ? rename.at(b.var) : b.var;
      const bool present = std::any_of(g.binders.begin(), g.binders.end(),
                                       [&](const Prefix::Binder& x) { return x.var == name; });
      if (!present) g.binders.push_back({b.universal, name});
    }
    g.bodies.push_back(rename.empty() ? imp->lhs : rename_variables(imp->lhs, rename));
  }

  KnowledgeBase out;
  out.signature = kb.signature;
  for (const auto& key : order) {
    const Group& g = groups.at(key);
    Formula body = g.bodies.front();
    for (std::size_t i = 1; i < g.bodies.size(); ++i) body = Formula::disj(body, g.bodies[i]);
    out.rules.push_back(with_prefix(g.binders, Formula::iff(Formula::atom(g.head), body)));
  }
  return out;
}

KnowledgeBase sample_kb(const KnowledgeBase& kb, double completeness, std::uint64_t seed) {
  if (!(completeness > 0.0 && completeness <= 1.0)) {
    throw ConfigError("completeness must lie in (0, 1]");
  }
  if (completeness == 1.0) return kb;
  const std::size_t n = kb.rules.size();
  const auto keep = std::min<std::size_t>(
      n, static_cast<std::size_t>(std::ceil(completeness * static_cast<double>(n) - 1e-9)));

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < keep; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(keep);
  std::sort(idx.begin(), idx.end());

  KnowledgeBase out;
  for (std::size_t i : idx) {
    out.rules.push_back(kb.rules[i]);
    extend_signature(out.signature, kb.rules[i]);
  }
  return out;
}

namespace {

Formula ground_rec(const Formula& f, const Domain& domain, std::map<std::string, std::string>& env) {
  return std::visit(
      [&](const auto& n) -> Formula {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, AtomRef>) {
          Atom a = n.atom;
          for (Term& t : a.args) {
            if (!t.is_variable()) continue;
            auto it = env.find(t.name);
            if (it == env.end()) throw ShapeError("unbound variable " + t.name);
            t = Term::constant(it->second);
          }
          return Formula::atom(std::move(a));
        } else if constexpr (std::is_same_v<T, Not>) {
          return Formula::negate(ground_rec(n.body, domain, env));
        } else if constexpr (std::is_same_v<T, Forall> || std::is_same_v<T, Exists>) {
          auto it = domain.find(n.var);
          if (it == domain.end() || it->second.empty()) {
            throw ShapeError("empty grounding domain for variable " + n.var);
          }
          std::optional<Formula> acc;
          for (const auto& c : it->second) {
            env[n.var] = c;
            Formula g = ground_rec(n.body, domain, env);
            if (!acc) {
              acc = std::move(g);
            } else if constexpr (std::is_same_v<T, Forall>) {
              acc = Formula::conj(*acc, g);
            } else {
              acc = Formula::disj(*acc, g);
            }
          }
          env.erase(n.var);
          return *acc;
        } else {
          Formula l = ground_rec(n.lhs, domain, env);
          Formula r = ground_rec(n.rhs, domain, env);
          if constexpr (std::is_same_v<T, Implies>) return Formula::implies(l, r);
          else if constexpr (std::is_same_v<T, And>) return Formula::conj(l, r);
          else if constexpr (std::is_same_v<T, Or>) return Formula::disj(l, r);
          else return Formula::iff(l, r);
        }
      },
      f.node());
}

}  // namespace

Formula ground_formula(const Formula& f, const Domain& domain) {
  std::map<std::string, std::string> env;
  return ground_rec(f, domain, env);
}

Formula substitute(const Formula& f, const std::map<std::string, std::string>& binding) {
  return std::visit(
      [&](const auto& n) -> Formula {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, AtomRef>) {
          Atom a = n.atom;
          for (Term& t : a.args) {
            if (!t.is_variable()) continue;
            if (auto it = binding.find(t.name); it != binding.end()) t = Term::constant(it->second);
          }
          return Formula::atom(std::move(a));
        } else if constexpr (std::is_same_v<T, Not>) {
          return Formula::negate(substitute(n.body, binding));
        } else if constexpr (std::is_same_v<T, Forall> || std::is_same_v<T, Exists>) {
          auto inner = binding;
          inner.erase(n.var);
          Formula body = substitute(n.body, inner);
          return std::is_same_v<T, Forall> ? Formula::forall(n.var, body) : Formula::exists(n.var, body);
        } else {
          Formula l = substitute(n.lhs, binding);
          Formula r = substitute(n.rhs, binding);
          if constexpr (std::is_same_v<T, Implies>) return Formula::implies(l, r);
          else if constexpr (std::is_same_v<T, And>) return Formula::conj(l, r);
          else if constexpr (std::is_same_v<T, Or>) return Formula::disj(l, r);
          else return Formula::iff(l, r);
        }
      },
      f.node());
}

}  // namespace rill::logic
