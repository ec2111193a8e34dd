#include "rill/learner/schedule.hpp"

#include <cmath>

#include "rill/errors.hpp"

namespace rill::learner {

void validate(const ScheduleSpec& s) {
  std::visit(
      [](const auto& x) {
        if (!(x.decay_rate > 0.0 && x.decay_rate <= 1.0)) throw ConfigError("decay rate must lie in (0, 1]");
        if (x.decay_step < 1) throw ConfigError("decay step must be at least 1");
      },
      s);
  if (const auto* w = std::get_if<StepWithWarmup>(&s); w && w->warmup_epochs < 1) {
    throw ConfigError("warmup epochs must be at least 1");
  }
}

double learning_rate(const ScheduleSpec& s, double base_lr, int epoch) {
  if (const auto* d = std::get_if<StepDecay>(&s)) {
    return base_lr * std::pow(d->decay_rate, epoch / d->decay_step);
  }
  const auto& w = std::get<StepWithWarmup>(s);
  if (epoch < w.warmup_epochs) return base_lr * (epoch + 1) / w.warmup_epochs;
  return base_lr * std::pow(w.decay_rate, (epoch - w.warmup_epochs) / w.decay_step);
}

}  // namespace rill::learner
