#include "rill/learner/mlp.hpp"

#include <cmath>
#include <random>

#include "rill/autodiff/ops.hpp"
#include "rill/errors.hpp"

namespace rill::learner {
namespace {

Linear make_linear(std::size_t in, std::size_t out, std::mt19937_64& rng) {
  Linear l{Matrix(in, out), Matrix(1, out)};
  const double bound = std::sqrt(6.0 / static_cast<double>(in));
  std::uniform_real_distribution<double> u(-bound, bound);
  for (double& w : l.weight.data()) w = u(rng);
  return l;
}

}  // namespace

MLP::MLP(MLPSpec spec, std::uint64_t seed) : spec_(std::move(spec)) {
  if (spec_.input_dim == 0) throw ConfigError("input dimension must be positive");
  if (spec_.hidden.empty()) throw ConfigError("an MLP needs at least one hidden layer");
  if (spec_.heads.empty()) throw ConfigError("an MLP needs at least one head");
  std::mt19937_64 rng(seed);
  std::size_t width = spec_.input_dim;
  for (std::size_t h : spec_.hidden) {
    if (h == 0) throw ConfigError("hidden widths must be positive");
    trunk_.push_back(make_linear(width, h, rng));
    width = h;
  }
  for (const HeadSpec& head : spec_.heads) {
    if (head.classes < 2) throw ConfigError("head '" + head.name + "' needs at least two classes");
    heads_.push_back(make_linear(width, head.classes, rng));
  }
}

std::vector<Matrix*> MLP::parameters() {
  std::vector<Matrix*> out;
  for (auto* group : {&trunk_, &heads_}) {
    for (Linear& l : *group) {
      out.push_back(&l.weight);
      out.push_back(&l.bias);
    }
  }
  return out;
}

std::vector<const Matrix*> MLP::parameters() const {
  std::vector<const Matrix*> out;
  for (auto* group : {&trunk_, &heads_}) {
    for (const Linear& l : *group) {
      out.push_back(&l.weight);
      out.push_back(&l.bias);
    }
  }
  return out;
}

std::size_t MLP::parameter_count() const {
  std::size_t n = 0;
  for (const Matrix* m : parameters()) n += m->size();
  return n;
}

std::vector<Var> MLP::bind(Tape& tape) const {
  std::vector<Var> out;
  for (const Matrix* m : parameters()) out.push_back(tape.leaf(*m));
  return out;
}

MLP::Output MLP::forward(std::span<const Var> params, const Var& x) const {
  if (x.cols() != spec_.input_dim) {
    throw ShapeError("input has " + std::to_string(x.cols()) + " features, model expects " +
                     std::to_string(spec_.input_dim));
  }
  if (params.size() != 2 * (trunk_.size() + heads_.size())) throw ShapeError("parameter list does not match model");
  std::size_t p = 0;
  Var h = x;
  for (std::size_t i = 0; i < trunk_.size(); ++i, p += 2) {
    h = ad::relu(ad::add_row_bias(ad::matmul(h, params[p]), params[p + 1]));
  }
  Output out;
  for (std::size_t i = 0; i < heads_.size(); ++i, p += 2) {
    Var logits = ad::add_row_bias(ad::matmul(h, params[p]), params[p + 1]);
    out.probs.push_back(ad::softmax_rows(logits));
    out.logits.push_back(logits);
  }
  return out;
}

std::vector<Matrix> MLP::predict(const Matrix& x) const {
  Tape tape;
  std::vector<Var> params;
  for (const Matrix* m : parameters()) params.push_back(tape.constant(*m));
  const Output out = forward(params, tape.constant(x));
  std::vector<Matrix> probs;
  for (const Var& p : out.probs) probs.push_back(p.value());
  return probs;
}

}  // namespace rill::learner
