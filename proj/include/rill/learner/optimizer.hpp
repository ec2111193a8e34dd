#pragma once

#include <string>
#include <variant>
#include <vector>

#include "rill/autodiff/matrix.hpp"

namespace rill::learner {

/// Adam with decoupled weight decay.
struct AdamW {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 5e-4;
  bool operator==(const AdamW&) const = default;
};

/// Heavy-ball SGD: v <- mu * v + g; p <- p - lr * v.
struct MomentumSGD {
  double lr = 0.005;
  double momentum = 0.9;
  bool operator==(const MomentumSGD&) const = default;
};

using OptimizerSpec = std::variant<AdamW, MomentumSGD>;

/// Throws ConfigError when lr <= 0 or momentum is outside [0, 1).
void validate(const OptimizerSpec& spec);
double base_lr(const OptimizerSpec& spec);

class Optimizer {
 public:
  explicit Optimizer(OptimizerSpec spec);

  /// One update with learning rate `lr` (the schedule's current value).
  /// `params` and `grads` must align and keep the same shapes across calls.
  void step(const std::vector<Matrix*>& params, const std::vector<Matrix>& grads, double lr);
  std::size_t steps_taken() const { return t_; }

 private:
  OptimizerSpec spec_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  std::size_t t_ = 0;
};

}  // namespace rill::learner
