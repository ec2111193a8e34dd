#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "rill/autodiff/matrix.hpp"

namespace rill {

class Tape;
using NodeId = std::uint32_t;

/// Handle to a value recorded on a Tape. A 1x1 Var plays the role of a
/// differentiable scalar; larger shapes are dense differentiable matrices.
/// Handles are cheap to copy and stay valid for the lifetime of their Tape.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, NodeId id) : tape_(tape), id_(id) {}

  Tape& tape() const { return *tape_; }
  NodeId id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

  const Matrix& value() const;
  /// Value of a 1x1 Var.
  double item() const { return value().item(); }
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  bool is_scalar() const { return value().is_scalar(); }
  /// False for constants and anything computed only from constants.
  bool requires_grad() const;

 private:
  Tape* tape_ = nullptr;
  NodeId id_ = 0;
};

/// Reverse-mode gradients produced by Tape::backward, indexed by node.
class Gradients {
 public:
  Gradients() = default;
  explicit Gradients(std::vector<Matrix> grads) : grads_(std::move(grads)) {}

  /// Gradient of the root w.r.t. `v`; zeros when `v` does not influence the root.
  Matrix of(const Var& v) const;
  double scalar(const Var& v) const { return of(v).item(); }
  std::size_t size() const { return grads_.size(); }

 private:
  std::vector<Matrix> grads_;
};

class BackwardContext;
using BackwardFn = std::function<void(BackwardContext&)>;

/// Append-only record of operations. Node ids are assigned in creation
/// order, which is a topological order, so backward is a single reverse
/// sweep. One Tape is meant to be used by a single thread.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;
  Tape(Tape&&) = default;
  Tape& operator=(Tape&&) = default;

  /// Differentiable input.
  Var leaf(Matrix value);
  Var leaf(double value) { return leaf(Matrix::scalar(value)); }
  Var constant(Matrix value);
  Var constant(double value) { return constant(Matrix::scalar(value)); }

  /// Records an op. `backward` receives the upstream gradient and must
  /// accumulate into the gradients of the inputs it is asked for.
  /// Throws DomainError if `value` contains NaN or Inf.
  Var record(Matrix value, std::vector<NodeId> inputs, BackwardFn backward);

  Gradients backward(const Var& root) const;

  const Matrix& value(NodeId id) const { return nodes_[id].value; }
  bool requires_grad(NodeId id) const { return nodes_[id].requires_grad; }
  std::size_t size() const { return nodes_.size(); }

  /// Smallest distance to a non-differentiable point seen by min, max,
  /// relu and indicator gates recorded so far. Used by the finite
  /// difference checker to avoid straddling a kink.
  double kink_margin() const { return kink_margin_; }
  void note_kink_margin(double margin);

 private:
  struct Node {
    Matrix value;
    std::vector<NodeId> inputs;
    BackwardFn backward;
    bool requires_grad = false;
  };

  std::vector<Node> nodes_;
  double kink_margin_ = std::numeric_limits<double>::infinity();

  friend class BackwardContext;
};

/// View handed to a node's backward function.
class BackwardContext {
 public:
  BackwardContext(const Tape& tape, NodeId self, const Matrix& upstream,
                  std::vector<Matrix>& grads)
      : tape_(tape), self_(self), upstream_(upstream), grads_(grads) {}

  const Matrix& upstream() const { return upstream_; }
  const Matrix& value() const { return tape_.value(self_); }
  std::size_t input_count() const { return tape_.nodes_[self_].inputs.size(); }
  const Matrix& input(std::size_t i) const;
  /// Whether input `i` needs a gradient at all.
  bool wants(std::size_t i) const;
  /// Accumulator for input `i`, zero-initialised with the input's shape.
  Matrix& grad(std::size_t i);

 private:
  const Tape& tape_;
  NodeId self_;
  const Matrix& upstream_;
  std::vector<Matrix>& grads_;
};

}  // namespace rill
