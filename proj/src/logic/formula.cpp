#include "rill/logic/formula.hpp"

#include <algorithm>
#include <set>

#include "rill/errors.hpp"

namespace rill::logic {

Formula Formula::atom(Atom a) { return Formula(std::make_shared<const Node>(AtomRef{std::move(a)})); }
Formula Formula::atom(std::string predicate, std::vector<Term> args) {
  return atom(Atom{std::move(predicate), std::move(args)});
}
Formula Formula::negate(Formula f) { return Formula(std::make_shared<const Node>(Not{std::move(f)})); }
Formula Formula::implies(Formula l, Formula r) {
  return Formula(std::make_shared<const Node>(Implies{std::move(l), std::move(r)}));
}
Formula Formula::conj(Formula l, Formula r) {
  return Formula(std::make_shared<const Node>(And{std::move(l), std::move(r)}));
}
Formula Formula::disj(Formula l, Formula r) {
  return Formula(std::make_shared<const Node>(Or{std::move(l), std::move(r)}));
}
Formula Formula::iff(Formula l, Formula r) {
  return Formula(std::make_shared<const Node>(Iff{std::move(l), std::move(r)}));
}
Formula Formula::forall(std::string var, Formula body) {
  return Formula(std::make_shared<const Node>(Forall{std::move(var), std::move(body)}));
}
Formula Formula::exists(std::string var, Formula body) {
  return Formula(std::make_shared<const Node>(Exists{std::move(var), std::move(body)}));
}

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (node_->index() != other.node_->index()) return false;
  return std::visit(
      [&](const auto& a) -> bool {
        using T = std::decay_t<decltype(a)>;
        const T& b = std::get<T>(*other.node_);
        if constexpr (std::is_same_v<T, AtomRef>) {
          return a.atom == b.atom;
        } else if constexpr (std::is_same_v<T, Not>) {
          return a.body == b.body;
        } else if constexpr (std::is_same_v<T, Forall> || std::is_same_v<T, Exists>) {
          return a.var == b.var && a.body == b.body;
        } else {
          return a.lhs == b.lhs && a.rhs == b.rhs;
        }
      },
      *node_);
}

namespace {

// Binding strength used by the formatter; quantifiers bind loosest.
int precedence(const Formula& f) {
  return std::visit(
      [](const auto& n) -> int {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Forall> || std::is_same_v<T, Exists>) return 0;
        else if constexpr (std::is_same_v<T, Iff>) return 1;
        else if constexpr (std::is_same_v<T, Implies>) return 2;
        else if constexpr (std::is_same_v<T, Or>) return 3;
        else if constexpr (std::is_same_v<T, And>) return 4;
        else if constexpr (std::is_same_v<T, Not>) return 5;
        else return 6;
      },
      f.node());
}

void format_into(const Formula& f, int min_prec, std::string& out);

void format_binary(const Formula& l, const Formula& r, const char* op, int lp, int rp,
                   std::string& out) {
  format_into(l, lp, out);
  out += op;
  format_into(r, rp, out);
}

void format_into(const Formula& f, int min_prec, std::string& out) {
  const bool parens = precedence(f) < min_prec;
  if (parens) out += '(';
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, AtomRef>) {
          out += to_string(n.atom);
        } else if constexpr (std::is_same_v<T, Not>) {
          out += '!';
          format_into(n.body, 5, out);
        } else if constexpr (std::is_same_v<T, Iff>) {
          format_binary(n.lhs, n.rhs, " <-> ", 2, 1, out);
        } else if constexpr (std::is_same_v<T, Implies>) {
          format_binary(n.lhs, n.rhs, " -> ", 3, 2, out);
        } else if constexpr (std::is_same_v<T, Or>) {
          format_binary(n.lhs, n.rhs, " | ", 3, 4, out);
        } else if constexpr (std::is_same_v<T, And>) {
          format_binary(n.lhs, n.rhs, " & ", 4, 5, out);
        } else {
          out += std::is_same_v<T, Forall> ? "forall " : "exists ";
          out += n.var;
          const Formula* body = &n.body;
          while (const T* inner = body->template as<T>()) {
            out += ", ";
            out += inner->var;
            body = &inner->body;
          }
          out += ": ";
          format_into(*body, 0, out);
        }
      },
      f.node());
  if (parens) out += ')';
}

void collect_atoms(const Formula& f, std::vector<Atom>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, AtomRef>) {
          if (std::find(out.begin(), out.end(), n.atom) == out.end()) out.push_back(n.atom);
        } else if constexpr (std::is_same_v<T, Not> || std::is_same_v<T, Forall> ||
                             std::is_same_v<T, Exists>) {
          collect_atoms(n.body, out);
        } else {
          collect_atoms(n.lhs, out);
          collect_atoms(n.rhs, out);
        }
      },
      f.node());
}

void collect_free(const Formula& f, std::vector<std::string>& bound,
                  std::vector<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, AtomRef>) {
          for (const Term& t : n.atom.args) {
            if (!t.is_variable()) continue;
            if (std::find(bound.begin(), bound.end(), t.name) != bound.end()) continue;
            if (std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
          }
        } else if constexpr (std::is_same_v<T, Not>) {
          collect_free(n.body, bound, out);
        } else if constexpr (std::is_same_v<T, Forall> || std::is_same_v<T, Exists>) {
          bound.push_back(n.var);
          collect_free(n.body, bound, out);
          bound.pop_back();
        } else {
          collect_free(n.lhs, bound, out);
          collect_free(n.rhs, bound, out);
        }
      },
      f.node());
}

}  // namespace

std::string to_string(const Atom& a) {
  std::string s = a.predicate;
  if (a.args.empty()) return s;
  s += '(';
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) s += ", ";
    s += a.args[i].name;
  }
  s += ')';
  return s;
}

std::string format_rule(const Formula& f) {
  std::string out;
  format_into(f, 0, out);
  return out;
}

std::string format_kb(const KnowledgeBase& kb) {
  std::string out;
  for (const auto& r : kb.rules) {
    out += format_rule(r);
    out += '\n';
  }
  return out;
}

bool is_core(const Formula& f) {
  return std::visit(
      [](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, AtomRef>) return true;
        else if constexpr (std::is_same_v<T, Not> || std::is_same_v<T, Forall> ||
                           std::is_same_v<T, Exists>)
          return is_core(n.body);
        else if constexpr (std::is_same_v<T, Implies>)
          return is_core(n.lhs) && is_core(n.rhs);
        else
          return false;
      },
      f.node());
}

Prefix split_prefix(const Formula& f) {
  Prefix p{{}, f};
  for (;;) {
    if (const auto* q = p.matrix.as<Forall>()) {
      p.binders.push_back({true, q->var});
      p.matrix = q->body;
    } else if (const auto* e = p.matrix.as<Exists>()) {
      p.binders.push_back({false, e->var});
      p.matrix = e->body;
    } else {
      return p;
    }
  }
}

Formula with_prefix(const std::vector<Prefix::Binder>& binders, Formula matrix) {
  for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
    matrix = it->universal ? Formula::forall(it->var, std::move(matrix))
                           : Formula::exists(it->var, std::move(matrix));
  }
  return matrix;
}

std::vector<Atom> atoms_of(const Formula& f) {
  std::vector<Atom> out;
  collect_atoms(f, out);
  return out;
}

std::vector<std::string> free_variables(const Formula& f) {
  std::vector<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

Formula rename_variables(const Formula& f, const std::map<std::string, std::string>& mapping) {
  auto rename = [&](const std::string& v) {
    auto it = mapping.find(v);
    return it == mapping.end() ? v : it->second;
  };
  return std::visit(
      [&](const auto& n) -> Formula {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, AtomRef>) {
          Atom a = n.atom;
          for (Term& t : a.args) {
            if (t.is_variable()) t.name = rename(t.name);
          }
          return Formula::atom(std::move(a));
        } else if constexpr (std::is_same_v<T, Not>) {
          return Formula::negate(rename_variables(n.body, mapping));
        } else if constexpr (std::is_same_v<T, Forall>) {
          return Formula::forall(rename(n.var), rename_variables(n.body, mapping));
        } else if constexpr (std::is_same_v<T, Exists>) {
          return Formula::exists(rename(n.var), rename_variables(n.body, mapping));
        } else if constexpr (std::is_same_v<T, Implies>) {
          return Formula::implies(rename_variables(n.lhs, mapping), rename_variables(n.rhs, mapping));
        } else if constexpr (std::is_same_v<T, And>) {
          return Formula::conj(rename_variables(n.lhs, mapping), rename_variables(n.rhs, mapping));
        } else if constexpr (std::is_same_v<T, Or>) {
          return Formula::disj(rename_variables(n.lhs, mapping), rename_variables(n.rhs, mapping));
        } else {
          return Formula::iff(rename_variables(n.lhs, mapping), rename_variables(n.rhs, mapping));
        }
      },
      f.node());
}

void extend_signature(Signature& sig, const Formula& f) {
  for (const Atom& a : atoms_of(f)) {
    auto [it, inserted] = sig.emplace(a.predicate, a.args.size());
    if (!inserted && it->second != a.args.size()) {
      throw ArityError("predicate " + a.predicate + " used with arity " +
                       std::to_string(a.args.size()) + " and " + std::to_string(it->second));
    }
  }
}

}  // namespace rill::logic
