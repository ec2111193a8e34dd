#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "rill/autodiff/ops.hpp"
#include "rill/errors.hpp"
#include "rill/fuzzy/diagnostics.hpp"
#include "rill/fuzzy/semantics.hpp"
#include "rill/logic/parser.hpp"
#include "support.hpp"

using namespace rill;
using namespace rill::fuzzy;
using logic::Formula;

namespace {

std::vector<FuzzyOperator> all_operators() {
  return {Reichenbach{}, Lukasiewicz{}, Sigmoidal{4, -0.5}, Sigmoidal{8, -0.5}, Sigmoidal{16, -0.5},
          Sigmoidal{32, -0.5}};
}

// Written out from the closed form, independently of the library.
double sigmoid_oracle(double s, double b0, double i) {
  const double d = (1.0 + std::exp(-s * (1.0 + b0))) / (std::exp(-b0 * s) - std::exp(-s * (1.0 + b0)));
  const double f = 1.0 / (1.0 + std::exp(-s * (i + b0)));
  return d * ((1.0 + std::exp(-b0 * s)) * f - 1.0);
}

double likelihood(const FuzzyOperator& op, const std::string& rule, const std::map<std::string, double>& vals) {
  Tape t;
  Valuation v;
  for (const auto& [k, x] : vals) v.set(k, {}, t.leaf(x));
  return logic_likelihood(op, logic::parse_rule(rule), v).item();
}

void collect_subformulas(const Formula& f, std::vector<Formula>& out) {
  out.push_back(f);
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, logic::Not> || std::is_same_v<T, logic::Forall> ||
                      std::is_same_v<T, logic::Exists>) {
          collect_subformulas(n.body, out);
        } else if constexpr (!std::is_same_v<T, logic::AtomRef>) {
          collect_subformulas(n.lhs, out);
          collect_subformulas(n.rhs, out);
        }
      },
      f.node());
}

}  // namespace

TEST_CASE("implication values") {
  CHECK(implication_value(Reichenbach{}, 0.3, 0.6) == doctest::Approx(0.88));
  CHECK(implication_value(Lukasiewicz{}, 0.7, 0.2) == doctest::Approx(0.5));
  CHECK(implication_value(Lukasiewicz{}, 0.2, 0.7) == 1.0);
  CHECK(sigmoidal_squash(Sigmoidal{8, -0.5}, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  Tape t;
  CHECK_THROWS_AS(implication_likelihood(Reichenbach{}, t.leaf(1.2), t.leaf(0.5)), DomainError);
  CHECK_THROWS_AS(parse_operator("sigmoidal:0:-0.5"), ConfigError);
}

TEST_CASE("sigmoidal matches the closed form") {
  for (double s : {4.0, 8.0, 16.0, 32.0}) {
    for (double i = 0.0; i <= 1.0; i += 0.05) {
      CHECK(sigmoidal_squash(Sigmoidal{s, -0.5}, i) == doctest::Approx(sigmoid_oracle(s, -0.5, i)).epsilon(1e-12));
    }
    CHECK(std::abs(sigmoidal_squash(Sigmoidal{s, -0.5}, 0.0)) < 1e-9);
    CHECK(std::abs(sigmoidal_squash(Sigmoidal{s, -0.5}, 1.0) - 1.0) < 1e-9);
  }
}

TEST_CASE("logic likelihood examples") {
  CHECK(likelihood(Reichenbach{}, "P -> Q", {{"P", 0.3}, {"Q", 0.6}}) == doctest::Approx(0.88));
  CHECK(likelihood(Reichenbach{}, "P & Q", {{"P", 0.5}, {"Q", 0.4}}) == doctest::Approx(0.20));

  Tape t;
  Valuation v;
  v.set_domain("x", {"a", "b", "c"});
  v.set("F", {"a"}, t.leaf(1.0));
  v.set("F", {"b"}, t.leaf(1.0));
  v.set("F", {"c"}, t.leaf(0.5));
  CHECK(logic_likelihood(Reichenbach{}, logic::parse_rule("forall x: F(x)"), v).item() ==
        doctest::Approx(2.5 / 3.0));
  CHECK(logic_likelihood(Reichenbach{}, logic::parse_rule("exists x: F(x)"), v).item() == 0.5);
  CHECK_THROWS_AS(logic_likelihood(Reichenbach{}, logic::parse_rule("forall x: G(x)"), v), MissingAtomError);
}

TEST_CASE("reichenbach reduction identities") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Formula conj = logic::parse_rule("P & Q"), disj = logic::parse_rule("P | Q");
  for (int i = 0; i < 10000; ++i) {
    const double p = u(rng), q = u(rng);
    Tape t;
    Valuation v;
    v.set("P", {}, t.leaf(p));
    v.set("Q", {}, t.leaf(q));
    CHECK(std::abs(logic_likelihood(Reichenbach{}, conj, v).item() - p * q) < 1e-12);
    CHECK(std::abs(logic_likelihood(Reichenbach{}, disj, v).item() - (p + q - p * q)) < 1e-12);
  }
}

TEST_CASE("range closure on random formulas") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto ops = all_operators();
  bool ok = true;
  for (int i = 0; i < 10000; ++i) {
    const Formula f = testing::random_quantified(rng, 5, 3);
    Tape t;
    Valuation v;
    v.set_domain("x", {"a", "b", "c"});
    for (int a = 0; a < 3; ++a)
      for (const char* c : {"a", "b", "c"}) v.set("Q" + std::to_string(a), {c}, t.leaf(u(rng)));
    std::vector<Formula> subs;
    collect_subformulas(f, subs);
    const FuzzyOperator& op = ops[static_cast<std::size_t>(i) % ops.size()];
    for (const Formula& s : subs) {
      if (!logic::free_variables(s).empty()) continue;
      const double val = logic_likelihood(op, s, v).item();
      if (!(val >= 0.0 && val <= 1.0)) ok = false;
    }
  }
  CHECK(ok);
}

TEST_CASE("boolean endpoints agree with classical truth") {
  std::mt19937_64 rng(23);
  for (const FuzzyOperator& op : all_operators()) {
    const bool exact = !std::holds_alternative<Sigmoidal>(op);
    for (int i = 0; i < 500; ++i) {
      const Formula f = testing::random_formula(rng, 5, 4);
      const int bits = static_cast<int>(rng() & 15u);
      Tape t;
      Valuation v;
      for (int a = 0; a < 4; ++a) v.set("P" + std::to_string(a), {}, t.leaf(double((bits >> a) & 1)));
      const double s = logic_likelihood(op, f, v).item();
      const bool truth = logic::evaluate_classical(
          f, [&](const logic::Atom& at) { return ((bits >> std::stoi(at.predicate.substr(1))) & 1) != 0; });
      if (exact) CHECK(s == (truth ? 1.0 : 0.0));
      else CHECK(std::abs(s - (truth ? 1.0 : 0.0)) < 1e-9);
    }
  }
}

TEST_CASE("partials match hand formulas") {
  for (double x = 0.05; x < 1.0; x += 0.1) {
    for (double y = 0.025; y < 1.0; y += 0.1) {
      PartialDerivatives r = partials(Reichenbach{}, x, y);
      CHECK(r.d_dx == doctest::Approx(y - 1.0));
      CHECK(r.d_dy == doctest::Approx(x));
      PartialDerivatives l = partials(Lukasiewicz{}, x, y);
      CHECK(l.d_dx == (x > y ? -1.0 : 0.0));
    }
  }
}

TEST_CASE("confidence monotonicity") {
  CHECK(check_confidence_monotonic(Reichenbach{}, 1.0, 50).strict);
  ConfidenceMonotonicReport l = check_confidence_monotonic(Lukasiewicz{}, 1.0, 50);
  CHECK_FALSE(l.strict);
  REQUIRE_FALSE(l.violating_points.empty());
  for (auto [x, y] : l.violating_points) CHECK(x <= y);
  CHECK(check_confidence_monotonic(Sigmoidal{8, -0.5}, 1.0, 50).strict);
}

TEST_CASE("implication bias") {
  CHECK(check_implication_biased(Reichenbach{}, 200).max_strict_delta == 1.0);
  CHECK(check_implication_biased(Sigmoidal{8, -0.5}, 200).max_strict_delta == 1.0);
  ImplicationBiasReport l = check_implication_biased(Lukasiewicz{}, 200);
  CHECK(l.max_strict_delta < 0.02);
  CHECK(std::abs(l.fraction_at(1.0) - 0.5) <= 0.02);
}

TEST_CASE("confidence monotonic implies implication biased") {
  for (const FuzzyOperator& op : all_operators()) {
    for (double delta : {0.25, 0.5, 1.0}) {
      if (!check_confidence_monotonic(op, delta, 40).strict) continue;
      CHECK(check_implication_biased(op, 40).max_strict_delta >= delta);
    }
  }
}

TEST_CASE("operator scan csv header") {
  std::ostringstream out;
  write_scan_csv(out, operator_scan(Reichenbach{}, 10));
  CHECK(out.str().rfind("x,y,I,dI_dx,dI_dy\n", 0) == 0);
}

TEST_CASE("column valuations evaluate row by row") {
  Tape t;
  Valuation v;
  v.set("P", {}, t.leaf(Matrix{{0.3}, {1.0}}));
  v.set("Q", {}, t.leaf(Matrix{{0.6}, {0.0}}));
  Var s = logic_likelihood(Reichenbach{}, logic::parse_rule("P -> Q"), v);
  CHECK(s.value()[0] == doctest::Approx(0.88));
  CHECK(s.value()[1] == 0.0);
  CHECK(v.batch_rows() == 2);
}
