#pragma once

#include <variant>

namespace rill::learner {

/// lr(epoch) = base * rate^floor(epoch / step)
struct StepDecay {
  double decay_rate = 0.7;
  int decay_step = 60;
  bool operator==(const StepDecay&) const = default;
};

/// Linear ramp base * (epoch + 1) / warmup over the first `warmup_epochs`,
/// then StepDecay counted from the end of the warm-up.
struct StepWithWarmup {
  double decay_rate = 0.9;
  int decay_step = 45;
  int warmup_epochs = 5;
  bool operator==(const StepWithWarmup&) const = default;
};

using ScheduleSpec = std::variant<StepDecay, StepWithWarmup>;

/// Throws ConfigError unless rate is in (0, 1] and steps are >= 1.
void validate(const ScheduleSpec& s);
double learning_rate(const ScheduleSpec& s, double base_lr, int epoch);

}  // namespace rill::learner
