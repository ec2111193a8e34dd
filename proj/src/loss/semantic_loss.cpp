#include "rill/loss/semantic_loss.hpp"

#include <algorithm>
#include <cstdint>

#include "rill/autodiff/ops.hpp"
#include "rill/errors.hpp"
#include "rill/logic/transforms.hpp"

namespace rill::loss {
namespace {

using logic::Formula;

// Postfix program over atom indices; evaluated once per assignment.
struct Program {
  enum class Op : std::uint8_t { Atom, Not, And, Or, Implies, Iff };
  struct Instr {
    Op op;
    std::uint32_t atom = 0;
  };
  std::vector<Instr> code;
  std::vector<logic::Atom> atoms;

  bool run(std::uint32_t assignment, std::vector<char>& stack) const {
    stack.clear();
    for (const Instr& in : code) {
      if (in.op == Op::Atom) {
        stack.push_back(static_cast<char>((assignment >> in.atom) & 1u));
        continue;
      }
      if (in.op == Op::Not) {
        stack.back() = !stack.back();
        continue;
      }
      const bool b = stack.back();
      stack.pop_back();
      const bool a = stack.back();
      switch (in.op) {
        case Op::And: stack.back() = a && b; break;
        case Op::Or: stack.back() = a || b; break;
        case Op::Implies: stack.back() = !a || b; break;
        case Op::Iff: stack.back() = a == b; break;
        default: break;
      }
    }
    return stack.back();
  }
};

void compile(const Formula& f, Program& p) {
  using namespace logic;
  if (const auto* a = f.as<AtomRef>()) {
    auto it = std::find(p.atoms.begin(), p.atoms.end(), a->atom);
    std::uint32_t idx = static_cast<std::uint32_t>(it - p.atoms.begin());
    if (it == p.atoms.end()) p.atoms.push_back(a->atom);
    p.code.push_back({Program::Op::Atom, idx});
  } else if (const auto* n = f.as<Not>()) {
    compile(n->body, p);
    p.code.push_back({Program::Op::Not});
  } else if (const auto* x = f.as<And>()) {
    compile(x->lhs, p), compile(x->rhs, p), p.code.push_back({Program::Op::And});
  } else if (const auto* x = f.as<Or>()) {
    compile(x->lhs, p), compile(x->rhs, p), p.code.push_back({Program::Op::Or});
  } else if (const auto* x = f.as<Implies>()) {
    compile(x->lhs, p), compile(x->rhs, p), p.code.push_back({Program::Op::Implies});
  } else if (const auto* x = f.as<Iff>()) {
    compile(x->lhs, p), compile(x->rhs, p), p.code.push_back({Program::Op::Iff});
  } else {
    throw ShapeError("semantic loss needs a quantifier-free formula after grounding");
  }
}

Program compile_checked(const Formula& f) {
  Program p;
  compile(f, p);
  if (p.atoms.size() > kMaxSemanticAtoms) {
    throw DomainError("semantic loss enumeration limited to " + std::to_string(kMaxSemanticAtoms) +
                      " atoms, formula has " + std::to_string(p.atoms.size()));
  }
  return p;
}

std::vector<std::uint32_t> models(const Program& p) {
  std::vector<std::uint32_t> out;
  std::vector<char> stack;
  const std::uint32_t n = 1u << p.atoms.size();
  for (std::uint32_t a = 0; a < n; ++a) {
    if (p.run(a, stack)) out.push_back(a);
  }
  return out;
}

bool has_quantifier(const Formula& f) {
  using namespace logic;
  if (f.is<Forall>() || f.is<Exists>()) return true;
  if (const auto* n = f.as<Not>()) return has_quantifier(n->body);
  if (f.is<AtomRef>()) return false;
  return std::visit(
      [](const auto& node) -> bool {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Implies> || std::is_same_v<T, And> ||
                      std::is_same_v<T, Or> || std::is_same_v<T, Iff>) {
          return has_quantifier(node.lhs) || has_quantifier(node.rhs);
        } else {
          return false;
        }
      },
      f.node());
}

}  // namespace

Var weighted_model_count(const Formula& f, const fuzzy::Valuation& probs) {
  const Formula ground = has_quantifier(f) ? logic::ground_formula(f, probs.domain()) : f;
  const Program prog = compile_checked(ground);
  const std::vector<std::uint32_t> sat = models(prog);
  const std::size_t k = prog.atoms.size();

  std::vector<Var> inputs;
  std::vector<NodeId> ids;
  for (const auto& a : prog.atoms) {
    inputs.push_back(probs.at(a));
    ids.push_back(inputs.back().id());
  }
  if (inputs.empty()) {
    // Constant formula without atoms cannot be written in the DSL.
    throw ShapeError("semantic loss formula has no atoms");
  }
  Tape& tape = inputs.front().tape();
  const std::size_t rows = inputs.front().value().size();
  const std::size_t out_rows = inputs.front().rows();
  const std::size_t out_cols = inputs.front().cols();

  Matrix wmc(out_rows, out_cols);
  Matrix partial(rows, k);  // d WMC / d p_i per row
  std::vector<double> prefix(k + 1), suffix(k + 1), w(k);
  for (std::size_t r = 0; r < rows; ++r) {
    double total = 0.0;
    for (std::uint32_t a : sat) {
      for (std::size_t i = 0; i < k; ++i) {
        const double p = inputs[i].value()[r];
        w[i] = (a >> i) & 1u ? p : 1.0 - p;
      }
      prefix[0] = 1.0;
      for (std::size_t i = 0; i < k; ++i) prefix[i + 1] = prefix[i] * w[i];
      suffix[k] = 1.0;
      for (std::size_t i = k; i-- > 0;) suffix[i] = suffix[i + 1] * w[i];
      total += prefix[k];
      for (std::size_t i = 0; i < k; ++i) {
        const double others = prefix[i] * suffix[i + 1];
        partial(r, i) += (a >> i) & 1u ? others : -others;
      }
    }
    wmc[r] = total;
  }
  return tape.record(std::move(wmc), std::move(ids), [partial = std::move(partial)](BackwardContext& ctx) {
    const Matrix& up = ctx.upstream();
    for (std::size_t i = 0; i < ctx.input_count(); ++i) {
      if (!ctx.wants(i)) continue;
      Matrix& g = ctx.grad(i);
      for (std::size_t r = 0; r < up.size(); ++r) g[r] += up[r] * partial(r, i);
    }
  });
}

Var semantic_loss_bruteforce(const Formula& f, const fuzzy::Valuation& probs) {
  const Var wmc = weighted_model_count(f, probs);
  for (double v : wmc.value().data()) {
    if (v <= 0.0) throw DomainError("weighted model count is zero (unsatisfiable under these probabilities)");
  }
  return ad::neg(ad::ln(wmc));
}

bool satisfiable(const Formula& f) {
  const Program prog = compile_checked(f);
  std::vector<char> stack;
  const std::uint32_t n = 1u << prog.atoms.size();
  for (std::uint32_t a = 0; a < n; ++a) {
    if (prog.run(a, stack)) return true;
  }
  return false;
}

}  // namespace rill::loss
