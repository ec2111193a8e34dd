#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "rill/errors.hpp"
#include "rill/logic/parser.hpp"
#include "rill/logic/transforms.hpp"
#include "support.hpp"

using namespace rill;
using namespace rill::logic;

namespace {

Formula P(const std::string& n) { return Formula::atom(n); }
Formula U(const std::string& pred, const std::string& var) { return Formula::atom(pred, {Term::variable(var)}); }

bool same_truth_table(const Formula& a, const Formula& b, int atoms) {
  for (int bits = 0; bits < (1 << atoms); ++bits) {
    auto truth = [&](const Atom& at) { return ((bits >> std::stoi(at.predicate.substr(1))) & 1) != 0; };
    if (evaluate_classical(a, truth) != evaluate_classical(b, truth)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("parse the case-study rule") {
  Formula f = parse_rule("forall x: Blue(x) -> Circle(x)");
  CHECK(f == Formula::forall("x", Formula::implies(U("Blue", "x"), U("Circle", "x"))));
}

TEST_CASE("parse an addition rule") {
  Formula f = parse_rule("forall x1,x2,x3,x4: D1_5(x1) & D2_2(x2) -> D3_0(x3) & D4_7(x4)");
  Formula body = Formula::implies(Formula::conj(U("D1_5", "x1"), U("D2_2", "x2")),
                                  Formula::conj(U("D3_0", "x3"), U("D4_7", "x4")));
  CHECK(f == Formula::forall("x1", Formula::forall("x2", Formula::forall("x3", Formula::forall("x4", body)))));
}

TEST_CASE("syntax errors carry positions") {
  CHECK_THROWS_AS(parse_rule("forall x: Blue(x) ->"), SyntaxError);
  CHECK_THROWS_AS(parse_rule(""), SyntaxError);
  CHECK_THROWS_AS(parse_rule("A & & B"), SyntaxError);
  CHECK_THROWS_AS(parse_rule("forall x: forall x: A(x)"), SyntaxError);
  try {
    parse_kb("A -> B\nA -> $");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 6);
  }
}

TEST_CASE("arity clashes") {
  CHECK_THROWS_AS(parse_rule("forall x, y: P(x) -> P(x, y)"), ArityError);
  CHECK_THROWS_AS(parse_kb("forall x: P(x)\nP"), ArityError);
}

TEST_CASE("precedence and associativity") {
  CHECK(parse_rule("!A & B | C -> D -> E <-> F") ==
        Formula::iff(Formula::implies(Formula::disj(Formula::conj(Formula::negate(P("A")), P("B")), P("C")),
                                      Formula::implies(P("D"), P("E"))),
                     P("F")));
  CHECK(parse_rule("A & B & C") == Formula::conj(Formula::conj(P("A"), P("B")), P("C")));
}

TEST_CASE("kb files skip comments and blank lines") {
  KnowledgeBase kb = parse_kb("# header\n\nforall x: A(x) -> B(x)  # trailing\n  \nforall y: B(y)\n");
  CHECK(kb.size() == 2);
  CHECK(kb.signature.at("A") == 1);
}

TEST_CASE("format/parse round-trip on random formulas") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 2000; ++i) {
    Formula f = i % 2 ? testing::random_formula(rng, 5, 4) : testing::random_quantified(rng, 5, 3);
    INFO(format_rule(f));
    CHECK(parse_rule(format_rule(f)) == f);
  }
}

TEST_CASE("normalize_core rewrites") {
  CHECK(normalize_core(Formula::conj(P("P0"), P("P1"))) ==
        Formula::negate(Formula::implies(P("P0"), Formula::negate(P("P1")))));
  CHECK(normalize_core(Formula::disj(P("P0"), P("P1"))) == Formula::implies(Formula::negate(P("P0")), P("P1")));
  CHECK(normalize_core(Formula::iff(P("P0"), P("P1"))) ==
        Formula::negate(Formula::implies(Formula::implies(P("P0"), P("P1")),
                                         Formula::negate(Formula::implies(P("P1"), P("P0"))))));
}

TEST_CASE("normalize_core preserves truth tables") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 3000; ++i) {
    Formula f = testing::random_formula(rng, 5, 6);
    Formula n = normalize_core(f);
    CHECK(is_core(n));
    CHECK(same_truth_table(f, n, 6));
  }
}

TEST_CASE("clark iff transform") {
  KnowledgeBase kb = parse_kb("forall x: Blue(x) -> Circle(x)");
  KnowledgeBase out = clark_iff_transform(kb);
  REQUIRE(out.size() == 1);
  CHECK(out.rules[0] == parse_rule("forall x: Blue(x) <-> Circle(x)"));
  CHECK(clark_iff_transform(KnowledgeBase{}).empty());
  CHECK_THROWS_AS(clark_iff_transform(parse_kb("forall x: !Blue(x)")), ShapeError);
}

TEST_CASE("clark grouped completion") {
  KnowledgeBase two = clark_grouped_completion(parse_kb("A1 -> A\nA2 -> A"));
  REQUIRE(two.size() == 1);
  CHECK(two.rules[0] == parse_rule("A <-> A1 | A2"));

  KnowledgeBase one = clark_grouped_completion(parse_kb("A1 -> A"));
  CHECK(one.rules[0] == parse_rule("A <-> A1"));

  KnowledgeBase split = clark_grouped_completion(parse_kb("A1 -> A\nB1 -> B"));
  REQUIRE(split.size() == 2);
  CHECK(split.rules[0] == parse_rule("A <-> A1"));
  CHECK(split.rules[1] == parse_rule("B <-> B1"));

  // Heads unify positionally across differently named variables.
  KnowledgeBase fo = clark_grouped_completion(parse_kb("forall x: C1(x) -> S(x)\nforall y: C2(y) -> S(y)"));
  REQUIRE(fo.size() == 1);
  CHECK(fo.rules[0] == parse_rule("forall x: S(x) <-> C1(x) | C2(x)"));

  CHECK_THROWS_AS(clark_grouped_completion(parse_kb("A -> B & C")), ShapeError);
}

TEST_CASE("sample_kb subsets") {
  std::string text;
  for (int i = 0; i < 100; ++i) text += "R" + std::to_string(i) + "\n";
  KnowledgeBase kb = parse_kb(text);
  KnowledgeBase s = sample_kb(kb, 0.4, 7);
  CHECK(s.size() == 40);
  CHECK(sample_kb(kb, 1.0, 7).rules == kb.rules);
  CHECK(sample_kb(kb, 0.6, 3).rules == sample_kb(kb, 0.6, 3).rules);
  CHECK(sample_kb(kb, 0.33, 1).size() == 33);
  CHECK(sample_kb(kb, 0.333, 1).size() == 34);

  // Subset, original order.
  std::vector<std::size_t> pos;
  for (const Formula& r : s.rules) {
    auto it = std::find(kb.rules.begin(), kb.rules.end(), r);
    REQUIRE(it != kb.rules.end());
    pos.push_back(static_cast<std::size_t>(it - kb.rules.begin()));
  }
  CHECK(std::is_sorted(pos.begin(), pos.end()));
  CHECK(std::set<std::size_t>(pos.begin(), pos.end()).size() == pos.size());
}

TEST_CASE("grounding") {
  Formula f = parse_rule("forall x: A(x) -> exists y: B(y)");
  Domain d{{"x", {"a", "b"}}, {"y", {"c"}}};
  Formula g = ground_formula(f, d);
  Formula a = Formula::atom("A", {Term::constant("a")}), b = Formula::atom("A", {Term::constant("b")});
  Formula c = Formula::atom("B", {Term::constant("c")});
  CHECK(g == Formula::conj(Formula::implies(a, c), Formula::implies(b, c)));
  CHECK(free_variables(parse_rule("forall x: A(x)")).empty());
}
