#include "rill/fuzzy/valuation.hpp"

#include "rill/errors.hpp"

namespace rill::fuzzy {

std::string Valuation::key(const logic::Atom& a) { return logic::to_string(a); }

void Valuation::set(const logic::Atom& ground_atom, const Var& value) {
  for (const auto& t : ground_atom.args) {
    if (t.is_variable()) throw DomainError("valuation atom is not ground: " + key(ground_atom));
  }
  for (double v : value.value().data()) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw DomainError("valuation of " + key(ground_atom) + " outside [0, 1]");
    }
  }
  if (values_.empty()) {
    rows_ = value.rows();
    cols_ = value.cols();
  } else if (value.rows() != rows_ || value.cols() != cols_) {
    throw ShapeError("valuation values must share one shape");
  }
  values_.insert_or_assign(key(ground_atom), value);
}

void Valuation::set(const std::string& predicate, const std::vector<std::string>& constants,
                    const Var& value) {
  logic::Atom a{predicate, {}};
  for (const auto& c : constants) a.args.push_back(logic::Term::constant(c));
  set(a, value);
}

const Var* Valuation::find(const logic::Atom& ground_atom) const {
  auto it = values_.find(key(ground_atom));
  return it == values_.end() ? nullptr : &it->second;
}

const Var& Valuation::at(const logic::Atom& ground_atom) const {
  if (const Var* v = find(ground_atom)) return *v;
  throw MissingAtomError("no valuation for atom " + key(ground_atom));
}

void Valuation::set_domain(const std::string& var, std::vector<std::string> constants) {
  domain_[var] = std::move(constants);
}

}  // namespace rill::fuzzy
