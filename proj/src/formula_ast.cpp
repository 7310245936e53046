#include "bilab/formula.hpp"

namespace bilab::fo {

Term Term::var(std::string name) { return {Kind::Var, std::move(name), {}}; }
Term Term::param(std::string name) { return {Kind::Param, std::move(name), {}}; }
Term Term::one() { return {Kind::One, {}, {}}; }
Term Term::product(Term left, Term right) { return {Kind::Product, {}, {std::move(left), std::move(right)}}; }
Term Term::inverse(Term t) { return {Kind::Inverse, {}, {std::move(t)}}; }
Term Term::conj(Term base, Term by) { return {Kind::Conj, {}, {std::move(base), std::move(by)}}; }

Formula Formula::eq(Term l, Term r) {
  Formula f;
  f.kind = Kind::Eq;
  f.terms = {std::move(l), std::move(r)};
  return f;
}

Formula Formula::in_sort(Term t, std::string sort) {
  Formula f;
  f.kind = Kind::InSort;
  f.terms = {std::move(t)};
  f.sort = std::move(sort);
  return f;
}

Formula Formula::negation(Formula g) {
  Formula f;
  f.kind = Kind::Not;
  f.children = {std::move(g)};
  return f;
}

Formula Formula::conjunction(std::vector<Formula> fs) {
  if (fs.size() == 1) return std::move(fs.front());
  Formula f;
  f.kind = Kind::And;
  f.children = std::move(fs);
  return f;
}

Formula Formula::disjunction(std::vector<Formula> fs) {
  if (fs.size() == 1) return std::move(fs.front());
  Formula f;
  f.kind = Kind::Or;
  f.children = std::move(fs);
  return f;
}

Formula Formula::exists(std::vector<Binder> bs, Formula body) {
  Formula f;
  f.kind = Kind::Exists;
  f.binders = std::move(bs);
  f.children = {std::move(body)};
  return f;
}

Formula Formula::forall(std::vector<Binder> bs, Formula body) {
  Formula f;
  f.kind = Kind::Forall;
  f.binders = std::move(bs);
  f.children = {std::move(body)};
  return f;
}

namespace {

bool is_quantifier(const Formula& f) {
  return f.kind == Formula::Kind::Exists || f.kind == Formula::Kind::Forall;
}

std::string print_factor(const Term& t);

std::string print_base(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Var:
      return t.name;
    case Term::Kind::Param:
      return "$" + t.name;
    case Term::Kind::One:
      return "1";
    default:
      return "(" + print(t) + ")";
  }
}

std::string print_factor(const Term& t) {
  if (t.kind == Term::Kind::Product) return "(" + print(t) + ")";
  return print(t);
}

}  // namespace

std::string print(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Var:
    case Term::Kind::Param:
    case Term::Kind::One:
      return print_base(t);
    case Term::Kind::Product:
      return print(t.args[0]) + " * " + print_factor(t.args[1]);
    case Term::Kind::Inverse:
      return print_factor(t.args[0]) + " ^-1";
    case Term::Kind::Conj:
      return print_factor(t.args[0]) + " ^ " + print_base(t.args[1]);
  }
  return {};
}

std::string print(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::Eq:
      return print(f.terms[0]) + " = " + print(f.terms[1]);
    case K::InSort:
      return print(f.terms[0]) + " in " + f.sort;
    case K::Not: {
      const Formula& c = f.children[0];
      if (c.kind == K::Eq || c.kind == K::InSort || c.kind == K::Not) return "not " + print(c);
      return "not (" + print(c) + ")";
    }
    case K::And:
    case K::Or: {
      std::string out;
      for (std::size_t i = 0; i < f.children.size(); ++i) {
        const Formula& c = f.children[i];
        if (i) out += f.kind == K::And ? " and " : " or ";
        bool wrap = is_quantifier(c) || c.kind == K::Or || (f.kind == K::And && c.kind == K::And);
        out += wrap ? "(" + print(c) + ")" : print(c);
      }
      return out;
    }
    case K::Exists:
    case K::Forall: {
      std::string out = f.kind == K::Exists ? "exists " : "forall ";
      for (std::size_t i = 0; i < f.binders.size(); ++i) {
        if (i) out += ", ";
        out += f.binders[i].var + ":" + f.binders[i].sort;
      }
      return out + " . " + print(f.children[0]);
    }
  }
  return {};
}

std::set<std::string> free_variables(const Term& t) {
  std::set<std::string> out;
  if (t.kind == Term::Kind::Var) out.insert(t.name);
  for (const Term& a : t.args) {
    auto sub = free_variables(a);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> out;
  for (const Term& t : f.terms) {
    auto sub = free_variables(t);
    out.insert(sub.begin(), sub.end());
  }
  for (const Formula& c : f.children) {
    auto sub = free_variables(c);
    out.insert(sub.begin(), sub.end());
  }
  for (const Binder& b : f.binders) out.erase(b.var);
  return out;
}

}  // namespace bilab::fo
