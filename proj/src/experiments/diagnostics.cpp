#include "rill/experiments/diagnostics.hpp"

#include <cmath>
#include <random>

#include "rill/errors.hpp"
#include "rill/logic/transforms.hpp"

namespace rill::experiments {

std::vector<ScatterRow> bias_scatter(const fuzzy::FuzzyOperator& op, const loss::OuterMap& g,
                                     const loss::LossTransform& t, std::size_t n, std::uint64_t seed) {
  const logic::Formula rule = logic::Formula::implies(logic::Formula::atom("p"), logic::Formula::atom("q"));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ScatterRow> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ScatterRow r;
    r.p = u(rng);
    r.q = u(rng);
    Tape tape;
    const Var p = tape.leaf(r.p);
    fuzzy::Valuation v;
    v.set("p", {}, p);
    v.set("q", {}, tape.leaf(r.q));
    const Var l = loss::rill(t, loss::logic_loss(op, g, rule, v));
    r.loss = l.item();
    r.grad_p = std::abs(tape.backward(l).scalar(p));
    rows.push_back(r);
  }
  return rows;
}

Table scatter_table(const std::vector<ScatterRow>& rows) {
  Table t{{"p", "q", "loss", "grad_p"}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({format_double(r.p), format_double(r.q), format_double(r.loss), format_double(r.grad_p)});
  }
  return t;
}

std::vector<LossSample> loss_distribution_report(const learner::MLP& model, const Matrix& features,
                                                 const std::vector<std::vector<int>>& labels,
                                                 const logic::Formula& rule, const learner::PredicateMap& map,
                                                 const fuzzy::FuzzyOperator& op, const loss::OuterMap& g) {
  std::vector<LossSample> out;
  if (features.rows() == 0) return out;
  const std::vector<std::string> slots{"s"};
  const logic::KnowledgeBase grounded = learner::ground_by_slots({{rule}, {}}, slots);
  const logic::Formula& f = grounded.rules.front();
  const auto* imp = f.as<logic::Implies>();
  if (imp == nullptr) throw ShapeError("loss distribution needs a single implication");

  Tape tape;
  std::vector<Var> params;
  for (const Matrix* m : model.parameters()) params.push_back(tape.constant(*m));
  const learner::MLP::Output o = model.forward(params, tape.constant(features));
  const fuzzy::Valuation v = learner::valuation_from_outputs({o.probs}, map, slots, learner::atoms_of(grounded));
  const Matrix losses = loss::logic_loss(op, g, f, v).value();

  for (std::size_t i = 0; i < features.rows(); ++i) {
    auto truth = [&](const logic::Atom& a) {
      const learner::PredicateTarget& t = map.at(a.predicate);
      return labels.at(t.head).at(i) == static_cast<int>(t.cls);
    };
    const bool relevant = logic::evaluate_classical(imp->lhs, truth) || logic::evaluate_classical(imp->rhs, truth);
    out.push_back({i, losses[i], relevant});
  }
  return out;
}

Table loss_distribution_table(const std::vector<LossSample>& samples) {
  Table t{{"index", "loss", "group"}, {}};
  for (const auto& s : samples) {
    t.rows.push_back({std::to_string(s.index), format_double(s.loss), s.relevant ? "relevant" : "irrelevant"});
  }
  return t;
}

}  // namespace rill::experiments
