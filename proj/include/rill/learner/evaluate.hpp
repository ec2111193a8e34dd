#pragma once

#include <vector>

#include "rill/learner/mlp.hpp"

namespace rill::learner {

struct HeadReport {
  double accuracy = 0.0;             // correct / labelled rows
  std::size_t labelled = 0;
  std::vector<double> frequency;     // share of all rows predicted as each class
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted], labelled rows only
};

struct EvalReport {
  std::vector<HeadReport> heads;
};

/// Argmax predictions per head. labels[h] may contain -1 (excluded from
/// accuracy and confusion but still counted in the frequencies).
/// Throws ShapeError on an empty dataset or mismatched label lists.
EvalReport evaluate(const MLP& model, const Matrix& features, const std::vector<std::vector<int>>& labels);

/// Argmax of each row; ties go to the lower class.
std::vector<int> argmax_rows(const Matrix& probs);

}  // namespace rill::learner
