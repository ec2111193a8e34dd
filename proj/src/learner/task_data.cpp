#include "rill/learner/task_data.hpp"

#include <algorithm>

#include "rill/autodiff/ops.hpp"
#include "rill/errors.hpp"
#include "rill/logic/transforms.hpp"

namespace rill::learner {

void TaskData::validate(std::size_t heads) const {
  if (labels.size() != heads) throw ShapeError("label lists do not match the number of heads");
  for (const auto& l : labels) {
    if (l.size() != size()) throw ShapeError("label list length differs from the instance count");
  }
  for (const auto& g : groups) {
    if (g.size() != slots.size()) throw ShapeError("group size differs from the slot count");
    for (std::size_t i : g) {
      if (i >= size()) throw ShapeError("group refers to a missing instance");
    }
  }
}

std::vector<std::size_t> TaskData::labelled(std::size_t h) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.at(h).size(); ++i) {
    if (labels[h][i] >= 0) out.push_back(i);
  }
  return out;
}

logic::KnowledgeBase ground_by_slots(const logic::KnowledgeBase& kb, const std::vector<std::string>& slots) {
  logic::KnowledgeBase out;
  out.signature = kb.signature;
  for (const logic::Formula& rule : kb.rules) {
    const logic::Prefix p = logic::split_prefix(rule);
    if (p.binders.size() > slots.size()) {
      throw ConfigError("rule '" + logic::format_rule(rule) + "' quantifies more variables than there are slots");
    }
    std::map<std::string, std::string> binding;
    for (std::size_t i = 0; i < p.binders.size(); ++i) binding[p.binders[i].var] = slots[i];
    out.rules.push_back(logic::substitute(p.matrix, binding));
  }
  return out;
}

std::vector<logic::Atom> atoms_of(const logic::KnowledgeBase& kb) {
  std::vector<logic::Atom> out;
  for (const logic::Formula& r : kb.rules) {
    for (logic::Atom& a : logic::atoms_of(r)) {
      if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(std::move(a));
    }
  }
  return out;
}

fuzzy::Valuation valuation_from_outputs(const std::vector<std::vector<Var>>& slot_probs,
                                        const PredicateMap& map, const std::vector<std::string>& slots,
                                        const std::vector<logic::Atom>& atoms) {
  if (slot_probs.size() != slots.size()) throw ShapeError("one probability set per slot is required");
  fuzzy::Valuation v;
  for (const logic::Atom& atom : atoms) {
    auto it = map.find(atom.predicate);
    if (it == map.end()) throw UnmappedPredicateError("predicate '" + atom.predicate + "' has no (head, class) mapping");
    if (atom.args.size() != 1 || atom.args[0].is_variable()) {
      throw ShapeError("atom " + logic::to_string(atom) + " must take exactly one slot constant");
    }
    auto slot = std::find(slots.begin(), slots.end(), atom.args[0].name);
    if (slot == slots.end()) throw ShapeError("atom " + logic::to_string(atom) + " names an unknown slot");
    const auto& heads = slot_probs[static_cast<std::size_t>(slot - slots.begin())];
    const PredicateTarget& t = it->second;
    if (t.head >= heads.size() || t.cls >= heads[t.head].cols()) {
      throw ShapeError("mapping for '" + atom.predicate + "' is outside the model's heads");
    }
    v.set(atom, ad::column(heads[t.head], t.cls));
  }
  return v;
}

}  // namespace rill::learner
