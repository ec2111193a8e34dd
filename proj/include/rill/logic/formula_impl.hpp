#pragma once

#include "rill/errors.hpp"

namespace rill::logic {

template <class Truth>
bool evaluate_classical(const Formula& f, const Truth& truth) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, AtomRef>) {
          return truth(n.atom);
        } else if constexpr (std::is_same_v<T, Not>) {
          return !evaluate_classical(n.body, truth);
        } else if constexpr (std::is_same_v<T, Implies>) {
          return !evaluate_classical(n.lhs, truth) || evaluate_classical(n.rhs, truth);
        } else if constexpr (std::is_same_v<T, And>) {
          return evaluate_classical(n.lhs, truth) && evaluate_classical(n.rhs, truth);
        } else if constexpr (std::is_same_v<T, Or>) {
          return evaluate_classical(n.lhs, truth) || evaluate_classical(n.rhs, truth);
        } else if constexpr (std::is_same_v<T, Iff>) {
          return evaluate_classical(n.lhs, truth) == evaluate_classical(n.rhs, truth);
        } else {
          throw ShapeError("classical evaluation needs a quantifier-free formula");
        }
      },
      f.node());
}

}  // namespace rill::logic
