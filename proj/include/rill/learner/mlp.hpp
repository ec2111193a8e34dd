#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rill/autodiff/tape.hpp"

namespace rill::learner {

struct HeadSpec {
  std::string name;
  std::size_t classes = 0;
  bool operator==(const HeadSpec&) const = default;
};

/// input -> ReLU hidden layers -> one linear classifier per head.
struct MLPSpec {
  std::size_t input_dim = 0;
  std::vector<std::size_t> hidden;
  std::vector<HeadSpec> heads;
  bool operator==(const MLPSpec&) const = default;
};

struct Linear {
  Matrix weight;  // in x out
  Matrix bias;    // 1 x out
};

class MLP {
 public:
  MLP() = default;
  /// He-uniform weights (bound sqrt(6 / fan_in)), zero biases.
  /// Throws ConfigError for an empty hidden list, a zero width or no heads.
  MLP(MLPSpec spec, std::uint64_t seed);

  struct Output {
    std::vector<Var> logits;  // per head, rows x classes
    std::vector<Var> probs;   // softmax of logits
  };

  /// Records every parameter as a leaf, in parameters() order.
  std::vector<Var> bind(Tape& tape) const;
  /// Throws ShapeError when x's width differs from the input dimension.
  Output forward(std::span<const Var> params, const Var& x) const;
  /// Forward on a fresh tape with constant parameters; returns per-head probabilities.
  std::vector<Matrix> predict(const Matrix& x) const;

  std::vector<Matrix*> parameters();
  std::vector<const Matrix*> parameters() const;
  const MLPSpec& spec() const { return spec_; }
  std::size_t parameter_count() const;

  const std::vector<Linear>& trunk() const { return trunk_; }
  const std::vector<Linear>& heads() const { return heads_; }
  std::vector<Linear>& trunk() { return trunk_; }
  std::vector<Linear>& heads() { return heads_; }

 private:
  MLPSpec spec_;
  std::vector<Linear> trunk_;
  std::vector<Linear> heads_;
};

}  // namespace rill::learner
