#pragma once

#include <string>
#include <variant>

#include "rill/autodiff/tape.hpp"

namespace rill::fuzzy {

/// I(x, y) = 1 - x + x*y
struct Reichenbach {
  bool operator==(const Reichenbach&) const = default;
};

/// I(x, y) = min(1 - x + y, 1)
struct Lukasiewicz {
  bool operator==(const Lukasiewicz&) const = default;
};

/// Reichenbach squashed by a sigmoid and renormalised so that 0 maps to 0
/// and 1 maps to 1. `steepness` must be positive.
struct Sigmoidal {
  double steepness = 8.0;
  double offset = -0.5;
  bool operator==(const Sigmoidal&) const = default;
};

using FuzzyOperator = std::variant<Reichenbach, Lukasiewicz, Sigmoidal>;

/// Differentiable implication likelihood. Inputs must lie in [0, 1]
/// (DomainError otherwise); the result does too.
Var implication_likelihood(const FuzzyOperator& op, const Var& x, const Var& y);

/// Plain-value version for scans and reports.
double implication_value(const FuzzyOperator& op, double x, double y);

/// The renormalised sigmoid applied to a Reichenbach value, and its slope.
double sigmoidal_squash(const Sigmoidal& op, double reichenbach);
double sigmoidal_slope(const Sigmoidal& op, double reichenbach);

/// "reichenbach", "lukasiewicz", "sigmoidal" or "sigmoidal:<s>:<b0>".
FuzzyOperator parse_operator(const std::string& text);
std::string to_string(const FuzzyOperator& op);

}  // namespace rill::fuzzy
