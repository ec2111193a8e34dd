#include "rill/learner/optimizer.hpp"

#include <cmath>

#include "rill/errors.hpp"

namespace rill::learner {

void validate(const OptimizerSpec& spec) {
  if (!(base_lr(spec) > 0.0)) throw ConfigError("learning rate must be positive");
  if (const auto* s = std::get_if<MomentumSGD>(&spec)) {
    if (!(s->momentum >= 0.0 && s->momentum < 1.0)) throw ConfigError("momentum must lie in [0, 1)");
  }
  if (const auto* a = std::get_if<AdamW>(&spec)) {
    if (!(a->beta1 >= 0.0 && a->beta1 < 1.0 && a->beta2 >= 0.0 && a->beta2 < 1.0)) {
      throw ConfigError("Adam betas must lie in [0, 1)");
    }
    if (a->weight_decay < 0.0) throw ConfigError("weight decay must be non-negative");
  }
}

double base_lr(const OptimizerSpec& spec) {
  return std::visit([](const auto& s) { return s.lr; }, spec);
}

Optimizer::Optimizer(OptimizerSpec spec) : spec_(spec) { validate(spec_); }

void Optimizer::step(const std::vector<Matrix*>& params, const std::vector<Matrix>& grads, double lr) {
  if (params.size() != grads.size()) throw ShapeError("optimizer got mismatched parameter and gradient lists");
  if (m_.empty()) {
    for (const Matrix* p : params) {
      m_.emplace_back(p->rows(), p->cols());
      v_.emplace_back(p->rows(), p->cols());
    }
  }
  ++t_;
  if (const auto* a = std::get_if<AdamW>(&spec_)) {
    const double c1 = 1.0 - std::pow(a->beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(a->beta2, static_cast<double>(t_));
    for (std::size_t k = 0; k < params.size(); ++k) {
      Matrix& p = *params[k];
      const Matrix& g = grads[k];
      if (!g.same_shape(p)) throw ShapeError("gradient shape differs from its parameter");
      for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] -= lr * a->weight_decay * p[i];
        m_[k][i] = a->beta1 * m_[k][i] + (1.0 - a->beta1) * g[i];
        v_[k][i] = a->beta2 * v_[k][i] + (1.0 - a->beta2) * g[i] * g[i];
        p[i] -= lr * (m_[k][i] / c1) / (std::sqrt(v_[k][i] / c2) + a->eps);
      }
    }
    return;
  }
  const auto& s = std::get<MomentumSGD>(spec_);
  for (std::size_t k = 0; k < params.size(); ++k) {
    Matrix& p = *params[k];
    const Matrix& g = grads[k];
    if (!g.same_shape(p)) throw ShapeError("gradient shape differs from its parameter");
    for (std::size_t i = 0; i < p.size(); ++i) {
      m_[k][i] = t_ == 1 ? g[i] : s.momentum * m_[k][i] + g[i];
      p[i] -= lr * m_[k][i];
    }
  }
}

}  // namespace rill::learner
