#include "rill/autodiff/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rill/errors.hpp"

namespace rill::ad {
namespace {

constexpr int kMaxResamples = 50;

double evaluate(const ExpressionBuilder& f, const std::vector<Matrix>& point) {
  Tape tape;
  std::vector<Var> leaves;
  leaves.reserve(point.size());
  for (const auto& m : point) leaves.push_back(tape.leaf(m));
  return f(tape, leaves).item();
}

}  // namespace

GradCheckReport finite_difference_check(const ExpressionBuilder& f, std::vector<Matrix> point,
                                        double h, double kink_guard, std::uint64_t jitter_seed) {
  GradCheckReport report;
  std::mt19937_64 rng(jitter_seed);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);

  std::vector<Matrix> grads;
  for (;;) {
    Tape tape;
    std::vector<Var> leaves;
    for (const auto& m : point) leaves.push_back(tape.leaf(m));
    const Var root = f(tape, leaves);
    if (tape.kink_margin() > kink_guard * h || report.resamples >= kMaxResamples) {
      const Gradients g = tape.backward(root);
      grads.clear();
      for (const auto& leaf : leaves) grads.push_back(g.of(leaf));
      break;
    }
    ++report.resamples;
    const double scale = 100.0 * kink_guard * h;
    for (auto& m : point) {
      for (double& v : m.data()) v += scale * jitter(rng);
    }
  }

  for (std::size_t i = 0; i < point.size(); ++i) {
    for (std::size_t k = 0; k < point[i].size(); ++k) {
      const double orig = point[i][k];
      point[i][k] = orig + h;
      const double up = evaluate(f, point);
      point[i][k] = orig - h;
      const double down = evaluate(f, point);
      point[i][k] = orig;
      const double fd = (up - down) / (2.0 * h);
      const double err = std::abs(grads[i][k] - fd) / (std::abs(fd) + 1e-12);
      report.max_rel_error = std::max(report.max_rel_error, err);
    }
  }
  report.point = std::move(point);
  return report;
}

double finite_difference_check(const ExpressionBuilder& f, std::span<const double> point,
                               double h) {
  std::vector<Matrix> pts;
  pts.reserve(point.size());
  for (double v : point) pts.push_back(Matrix::scalar(v));
  return finite_difference_check(f, std::move(pts), h).max_rel_error;
}

}  // namespace rill::ad
