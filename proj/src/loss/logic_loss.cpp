#include "rill/loss/logic_loss.hpp"

#include <sstream>

#include "rill/autodiff/ops.hpp"
#include "rill/errors.hpp"

namespace rill::loss {
namespace {

double checked_epsilon(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("transform epsilon must lie in (0, 1)");
  return eps;
}

}  // namespace

Var outer_map(const OuterMap& g, const Var& s) {
  return std::visit(
      [&](const NegLogBase2&) { return ad::one_minus(ad::log2(ad::affine(s, 1.0, 1.0))); }, g);
}

Var logic_loss(const fuzzy::FuzzyOperator& op, const OuterMap& g, const logic::Formula& f,
               const fuzzy::Valuation& v) {
  return outer_map(g, fuzzy::logic_likelihood(op, f, v));
}

Var rill(const LossTransform& t, const Var& l) {
  return std::visit(
      [&](const auto& tr) -> Var {
        using T = std::decay_t<decltype(tr)>;
        if constexpr (std::is_same_v<T, Identity>) {
          return l;
        } else if constexpr (std::is_same_v<T, L2>) {
          return ad::square(l);
        } else if constexpr (std::is_same_v<T, Hinge>) {
          return ad::indicator_gate(l.value(), checked_epsilon(tr.epsilon), l, ad::GateMode::Greater);
        } else {
          const double eps = checked_epsilon(tr.epsilon);
          const Var low = ad::indicator_gate(l.value(), eps, ad::square(l), ad::GateMode::LessEqual);
          const Var high = ad::indicator_gate(l.value(), eps, l, ad::GateMode::Greater);
          return ad::add(low, high);
        }
      },
      t);
}

LossTransform parse_transform(const std::string& text) {
  if (text == "identity") return Identity{};
  if (text == "l2") return L2{};
  auto eps_of = [&](std::size_t prefix) {
    std::istringstream in(text.substr(prefix));
    double eps = 0.0;
    if (!(in >> eps) || !in.eof()) throw ConfigError("bad epsilon in transform '" + text + "'");
    return checked_epsilon(eps);
  };
  if (text.rfind("hinge:", 0) == 0) return Hinge{eps_of(6)};
  if (text.rfind("l2hinge:", 0) == 0) return L2Hinge{eps_of(8)};
  throw ConfigError("unknown loss transform '" + text + "'");
}

std::string to_string(const LossTransform& t) {
  return std::visit(
      [](const auto& tr) -> std::string {
        using T = std::decay_t<decltype(tr)>;
        std::ostringstream s;
        if constexpr (std::is_same_v<T, Identity>) s << "identity";
        else if constexpr (std::is_same_v<T, L2>) s << "l2";
        else if constexpr (std::is_same_v<T, Hinge>) s << "hinge:" << tr.epsilon;
        else s << "l2hinge:" << tr.epsilon;
        return s.str();
      },
      t);
}

}  // namespace rill::loss
