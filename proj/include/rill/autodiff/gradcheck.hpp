#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rill/autodiff/tape.hpp"

namespace rill::ad {

/// Builds a scalar expression from leaf Vars, one per input matrix.
using ExpressionBuilder = std::function<Var(Tape&, std::span<const Var>)>;

struct GradCheckReport {
  /// max over coordinates of |autodiff - central difference| / (|central difference| + 1e-12)
  double max_rel_error = 0.0;
  /// The point actually checked (differs from the request after a resample).
  std::vector<Matrix> point;
  int resamples = 0;
};

/// Central-difference check of reverse-mode gradients. If the autodiff
/// pass records a min/max/relu/gate input within `kink_guard * h` of its
/// switching point, the point is jittered deterministically and retried.
GradCheckReport finite_difference_check(const ExpressionBuilder& f, std::vector<Matrix> point,
                                        double h, double kink_guard = 10.0,
                                        std::uint64_t jitter_seed = 0);

/// Scalar-coordinates convenience overload; returns the max relative error.
double finite_difference_check(const ExpressionBuilder& f, std::span<const double> point,
                               double h);

}  // namespace rill::ad
