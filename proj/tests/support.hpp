#pragma once

// Shared generators for the property tests.

#include <random>
#include <string>
#include <vector>

#include "rill/logic/formula.hpp"

namespace rill::testing {

/// Random propositional formula over atoms P0..P<atoms-1>, all connectives.
inline logic::Formula random_formula(std::mt19937_64& rng, int depth, int atoms) {
  using logic::Formula;
  std::uniform_int_distribution<int> pick_atom(0, atoms - 1);
  std::uniform_int_distribution<int> pick_op(0, 5);
  if (depth <= 0 || pick_op(rng) == 0) return Formula::atom("P" + std::to_string(pick_atom(rng)));
  switch (pick_op(rng)) {
    case 1: return Formula::negate(random_formula(rng, depth - 1, atoms));
    case 2: return Formula::implies(random_formula(rng, depth - 1, atoms), random_formula(rng, depth - 1, atoms));
    case 3: return Formula::conj(random_formula(rng, depth - 1, atoms), random_formula(rng, depth - 1, atoms));
    case 4: return Formula::disj(random_formula(rng, depth - 1, atoms), random_formula(rng, depth - 1, atoms));
    default: return Formula::iff(random_formula(rng, depth - 1, atoms), random_formula(rng, depth - 1, atoms));
  }
}

/// Same, but atoms are unary over a single bound variable and the whole
/// thing may sit under quantifiers: Forall/Exists x over P_i(x).
inline logic::Formula random_quantified(std::mt19937_64& rng, int depth, int atoms) {
  using logic::Formula;
  using logic::Term;
  std::uniform_int_distribution<int> pick_atom(0, atoms - 1);
  std::uniform_int_distribution<int> pick_op(0, 5);
  const auto leaf = [&] {
    return Formula::atom("Q" + std::to_string(pick_atom(rng)), {Term::variable("x")});
  };
  const auto body = [&](auto&& self, int d) -> Formula {
    if (d <= 0 || pick_op(rng) == 0) return leaf();
    switch (pick_op(rng)) {
      case 1: return Formula::negate(self(self, d - 1));
      case 2: return Formula::implies(self(self, d - 1), self(self, d - 1));
      case 3: return Formula::conj(self(self, d - 1), self(self, d - 1));
      case 4: return Formula::disj(self(self, d - 1), self(self, d - 1));
      default: return Formula::iff(self(self, d - 1), self(self, d - 1));
    }
  };
  Formula b = body(body, depth - 1);
  return std::bernoulli_distribution(0.5)(rng) ? Formula::forall("x", b) : Formula::exists("x", b);
}

}  // namespace rill::testing
