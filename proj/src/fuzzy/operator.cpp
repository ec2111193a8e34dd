#include "rill/fuzzy/operator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rill/autodiff/ops.hpp"
#include "rill/errors.hpp"

namespace rill::fuzzy {
namespace {

void require_unit(const Var& v, const char* what) {
  for (double x : v.value().data()) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw DomainError(std::string(what) + " outside [0, 1]: " + std::to_string(x));
    }
  }
}

void require_valid(const Sigmoidal& s) {
  if (!(s.steepness > 0.0) || !std::isfinite(s.offset)) {
    throw DomainError("sigmoidal operator needs steepness > 0 and a finite offset");
  }
}

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Normalising constants: d scales, h multiplies the logistic term.
struct SigmoidConstants {
  double d, h;
};

SigmoidConstants constants(const Sigmoidal& op) {
  const double s = op.steepness, b0 = op.offset;
  const double e_b = std::exp(-b0 * s);
  const double e_1b = std::exp(-s * (1.0 + b0));
  return {(1.0 + e_1b) / (e_b - e_1b), 1.0 + e_b};
}

}  // namespace

double sigmoidal_squash(const Sigmoidal& op, double r) {
  require_valid(op);
  const auto [d, h] = constants(op);
  const double f = logistic(op.steepness * (r + op.offset));
  return std::clamp(d * (h * f - 1.0), 0.0, 1.0);
}

double sigmoidal_slope(const Sigmoidal& op, double r) {
  require_valid(op);
  const auto [d, h] = constants(op);
  const double f = logistic(op.steepness * (r + op.offset));
  return d * h * op.steepness * f * (1.0 - f);
}

Var implication_likelihood(const FuzzyOperator& op, const Var& x, const Var& y) {
  require_unit(x, "premise likelihood");
  require_unit(y, "consequent likelihood");
  // 1 - x*(1-y) keeps Reichenbach inside [0,1] under rounding.
  auto reichenbach = [&] { return ad::one_minus(ad::mul(x, ad::one_minus(y))); };
  return std::visit(
      [&](const auto& o) -> Var {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, Reichenbach>) {
          return reichenbach();
        } else if constexpr (std::is_same_v<T, Lukasiewicz>) {
          const Var raw = ad::add(ad::one_minus(x), y);
          return ad::min(raw, x.tape().constant(1.0));
        } else {
          require_valid(o);
          return ad::map(
              reichenbach(), [o](double r) { return sigmoidal_squash(o, r); },
              [o](double r) { return sigmoidal_slope(o, r); });
        }
      },
      op);
}

double implication_value(const FuzzyOperator& op, double x, double y) {
  const double r = 1.0 - x * (1.0 - y);
  return std::visit(
      [&](const auto& o) -> double {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, Reichenbach>) return r;
        else if constexpr (std::is_same_v<T, Lukasiewicz>) return std::min(1.0 - x + y, 1.0);
        else return sigmoidal_squash(o, r);
      },
      op);
}

FuzzyOperator parse_operator(const std::string& text) {
  if (text == "reichenbach") return Reichenbach{};
  if (text == "lukasiewicz") return Lukasiewicz{};
  if (text == "sigmoidal") return Sigmoidal{};
  if (text.rfind("sigmoidal:", 0) == 0) {
    std::istringstream in(text.substr(10));
    Sigmoidal s;
    char sep = 0;
    if (in >> s.steepness >> sep >> s.offset && sep == ':' && in.eof()) {
      if (!(s.steepness > 0.0)) throw ConfigError("sigmoidal steepness must be positive in '" + text + "'");
      return s;
    }
  }
  throw ConfigError("unknown fuzzy operator '" + text + "'");
}

std::string to_string(const FuzzyOperator& op) {
  return std::visit(
      [](const auto& o) -> std::string {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, Reichenbach>) return "reichenbach";
        else if constexpr (std::is_same_v<T, Lukasiewicz>) return "lukasiewicz";
        else {
          std::ostringstream s;
          s << "sigmoidal:" << o.steepness << ":" << o.offset;
          return s.str();
        }
      },
      op);
}

}  // namespace rill::fuzzy
