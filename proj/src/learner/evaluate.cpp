#include "rill/learner/evaluate.hpp"

#include "rill/errors.hpp"

namespace rill::learner {

std::vector<int> argmax_rows(const Matrix& probs) {
  std::vector<int> out(probs.rows());
  for (std::size_t r = 0; r < probs.rows(); ++r) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < probs.cols(); ++c) {
      if (probs(r, c) > probs(r, best)) best = c;
    }
    out[r] = static_cast<int>(best);
  }
  return out;
}

EvalReport evaluate(const MLP& model, const Matrix& features, const std::vector<std::vector<int>>& labels) {
  if (features.rows() == 0) throw ShapeError("cannot evaluate on an empty dataset");
  if (labels.size() != model.spec().heads.size()) throw ShapeError("one label list per head is required");
  const std::vector<Matrix> probs = model.predict(features);
  EvalReport report;
  for (std::size_t h = 0; h < probs.size(); ++h) {
    if (labels[h].size() != features.rows()) throw ShapeError("label list length differs from the row count");
    const std::size_t k = probs[h].cols();
    HeadReport hr;
    hr.frequency.assign(k, 0.0);
    hr.confusion.assign(k, std::vector<std::size_t>(k, 0));
    std::size_t correct = 0;
    const std::vector<int> pred = argmax_rows(probs[h]);
    for (std::size_t i = 0; i < pred.size(); ++i) {
      hr.frequency[static_cast<std::size_t>(pred[i])] += 1.0;
      const int y = labels[h][i];
      if (y < 0) continue;
      if (static_cast<std::size_t>(y) >= k) throw ShapeError("label out of range for head");
      ++hr.labelled;
      hr.confusion[static_cast<std::size_t>(y)][static_cast<std::size_t>(pred[i])]++;
      if (pred[i] == y) ++correct;
    }
    for (double& f : hr.frequency) f /= static_cast<double>(pred.size());
    hr.accuracy = hr.labelled ? static_cast<double>(correct) / static_cast<double>(hr.labelled) : 0.0;
    report.heads.push_back(std::move(hr));
  }
  return report;
}

}  // namespace rill::learner
