#pragma once

#include <string>
#include <variant>

#include "rill/fuzzy/semantics.hpp"

namespace rill::loss {

/// g(s) = 1 - log2(s + 1): decreasing, g(1) = 0, g(0) = 1.
///
/// Base 2 is what makes g(1) = 0 hold; with the natural log, g(1) would be
/// 1 - ln 2 ~ 0.307 and a satisfied rule would still carry a loss.
struct NegLogBase2 {
  bool operator==(const NegLogBase2&) const = default;
};
using OuterMap = std::variant<NegLogBase2>;

Var outer_map(const OuterMap& g, const Var& likelihood);

struct Identity {
  bool operator==(const Identity&) const = default;
};
/// l^2
struct L2 {
  bool operator==(const L2&) const = default;
};
/// l * [l > eps]
struct Hinge {
  double epsilon = 0.1;
  bool operator==(const Hinge&) const = default;
};
/// l^2 * [l <= eps] + l * [l > eps]; jumps from eps^2 to eps at the threshold.
struct L2Hinge {
  double epsilon = 0.1;
  bool operator==(const L2Hinge&) const = default;
};
using LossTransform = std::variant<Identity, L2, Hinge, L2Hinge>;

/// g(s(f, v)).
Var logic_loss(const fuzzy::FuzzyOperator& op, const OuterMap& g, const logic::Formula& f,
               const fuzzy::Valuation& v);

/// Applies a reduced-implication-bias transform to a loss in [0, 1].
/// The indicators are hard gates: no gradient flows through the condition.
Var rill(const LossTransform& t, const Var& loss);

/// "identity", "l2", "hinge:<eps>", "l2hinge:<eps>". Epsilon must lie in (0, 1).
LossTransform parse_transform(const std::string& text);
std::string to_string(const LossTransform& t);

}  // namespace rill::loss
