#pragma once

#include <functional>
#include <span>
#include <vector>

#include "rill/autodiff/tape.hpp"

// Differentiable operations. Elementwise binary ops require equal shapes,
// except that a 1x1 operand is broadcast against the other one.
namespace rill::ad {

Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
/// Throws DomainError when any divisor entry is zero.
Var div(const Var& a, const Var& b);
Var neg(const Var& a);

/// Throws DomainError for non-positive entries.
Var ln(const Var& a);
Var log2(const Var& a);
Var exp(const Var& a);

/// Elementwise min/max. The active branch gets gradient 1, the other 0;
/// exact ties go to the left argument.
Var min(const Var& a, const Var& b);
Var max(const Var& a, const Var& b);
Var relu(const Var& a);

/// scale * a + shift with constant coefficients.
Var affine(const Var& a, double scale, double shift);
/// 1 - a
Var one_minus(const Var& a);
Var square(const Var& a);

Var matmul(const Var& a, const Var& b);
/// X + 1 * bias for a 1 x cols bias row.
Var add_row_bias(const Var& x, const Var& bias);
Var softmax_rows(const Var& logits);
/// Mean over rows with a label >= 0 of -log softmax(logits)[label].
/// Rows labelled -1 are ignored; returns constant 0 when none remain.
Var cross_entropy_rows(const Var& logits, std::span<const int> labels);

/// Sum / mean of all entries, as a 1x1 Var.
Var sum(const Var& a);
Var mean(const Var& a);

Var slice_rows(const Var& a, std::size_t begin, std::size_t count);
Var column(const Var& a, std::size_t col);

enum class GateMode { Greater, LessEqual };

/// Hard gate: payload where `cond` satisfies the comparison against
/// `threshold`, 0 elsewhere. `cond` is a plain value matrix (or 1x1,
/// broadcast), so the indicator contributes no gradient.
Var indicator_gate(const Matrix& cond, double threshold, const Var& payload, GateMode mode);
Var indicator_gate(double cond, double threshold, const Var& payload, GateMode mode);

/// Elementwise map with a caller-supplied derivative.
Var map(const Var& a, const std::function<double(double)>& f,
        const std::function<double(double)>& df);

/// Elementwise mean / min over same-shaped Vars.
Var mean_of(std::span<const Var> xs);
Var min_of(std::span<const Var> xs);

enum class OpKind {
  Add, Sub, Mul, Div, Neg, Log2, Ln, Exp, Min, Max, Relu, MatMul, SoftmaxRow, Mean, Sum
};

/// Generic entry point for the parameter-free op kinds.
Var record(OpKind kind, std::span<const Var> inputs);

}  // namespace rill::ad
