#include "rill/autodiff/tape.hpp"

#include <algorithm>

#include "rill/errors.hpp"

namespace rill {

const Matrix& Var::value() const { return tape_->value(id_); }
bool Var::requires_grad() const { return tape_->requires_grad(id_); }

Matrix Gradients::of(const Var& v) const {
  if (v.id() < grads_.size() && !grads_[v.id()].empty()) return grads_[v.id()];
  return Matrix(v.rows(), v.cols());
}

Var Tape::leaf(Matrix value) {
  if (!value.all_finite()) throw DomainError("non-finite leaf value");
  nodes_.push_back(Node{std::move(value), {}, {}, true});
  return Var(this, static_cast<NodeId>(nodes_.size() - 1));
}

Var Tape::constant(Matrix value) {
  if (!value.all_finite()) throw DomainError("non-finite constant value");
  nodes_.push_back(Node{std::move(value), {}, {}, false});
  return Var(this, static_cast<NodeId>(nodes_.size() - 1));
}

Var Tape::record(Matrix value, std::vector<NodeId> inputs, BackwardFn backward) {
  if (!value.all_finite()) throw DomainError("operation produced a non-finite value");
  const bool needs = std::any_of(inputs.begin(), inputs.end(),
                                 [&](NodeId i) { return nodes_[i].requires_grad; });
  nodes_.push_back(Node{std::move(value), std::move(inputs),
                        needs ? std::move(backward) : BackwardFn{}, needs});
  return Var(this, static_cast<NodeId>(nodes_.size() - 1));
}

void Tape::note_kink_margin(double margin) { kink_margin_ = std::min(kink_margin_, margin); }

Gradients Tape::backward(const Var& root) const {
  if (&root.tape() != this) throw ShapeError("backward root belongs to another tape");
  if (!root.is_scalar()) throw ShapeError("backward root must be a 1x1 scalar");
  std::vector<Matrix> grads(nodes_.size());
  grads[root.id()] = Matrix::scalar(1.0);
  for (std::size_t i = root.id() + 1; i-- > 0;) {
    const Node& node = nodes_[i];
    if (grads[i].empty() || !node.backward) continue;
    BackwardContext ctx(*this, static_cast<NodeId>(i), grads[i], grads);
    node.backward(ctx);
  }
  return Gradients(std::move(grads));
}

const Matrix& BackwardContext::input(std::size_t i) const {
  return tape_.value(tape_.nodes_[self_].inputs[i]);
}

bool BackwardContext::wants(std::size_t i) const {
  return tape_.requires_grad(tape_.nodes_[self_].inputs[i]);
}

Matrix& BackwardContext::grad(std::size_t i) {
  const NodeId id = tape_.nodes_[self_].inputs[i];
  Matrix& g = grads_[id];
  if (g.empty()) {
    const Matrix& v = tape_.value(id);
    g = Matrix(v.rows(), v.cols());
  }
  return g;
}

}  // namespace rill
