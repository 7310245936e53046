#pragma once

// Sorted first-order formulas over the group language with named
// parameters: AST, concrete syntax, evaluation over finite carriers and
// definable-set construction.
//
// Grammar (ASCII, whitespace-insensitive):
//   formula := ("exists"|"forall") binder ("," binder)* "." formula | disj
//   binder  := ident ":" ident
//   disj    := conj ("or" conj)*      conj := lit ("and" lit)*
//   lit     := "not" lit | "(" formula ")" | atom
//   atom    := term "=" term | term "in" ident
//   term    := factor ("*" factor)*
//   factor  := base ("^" base | "^-1")*
//   base    := ident | "$" ident | "1" | "(" term ")"
// "a ^ b" is conjugation b^-1 a b, "^-1" inversion, "$x" a parameter.

#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bilab/sl2.hpp"

namespace bilab::fo {

struct Term {
  enum class Kind { Var, Param, One, Product, Inverse, Conj };

  Kind kind = Kind::One;
  std::string name;        // Var, Param
  std::vector<Term> args;  // Product: {left, right}; Inverse: {t}; Conj: {base, by}

  static Term var(std::string name);
  static Term param(std::string name);
  static Term one();
  static Term product(Term left, Term right);
  static Term inverse(Term t);
  static Term conj(Term base, Term by);

  friend bool operator==(const Term&, const Term&) = default;
};

struct Binder {
  std::string var;
  std::string sort;

  friend bool operator==(const Binder&, const Binder&) = default;
};

struct Formula {
  enum class Kind { Eq, InSort, Not, And, Or, Exists, Forall };

  Kind kind = Kind::Eq;
  std::vector<Term> terms;        // Eq: {lhs, rhs}; InSort: {t}
  std::string sort;               // InSort
  std::vector<Binder> binders;    // Exists, Forall
  std::vector<Formula> children;  // Not: 1; And/Or: >= 2; quantifiers: {body}

  static Formula eq(Term l, Term r);
  static Formula in_sort(Term t, std::string sort);
  static Formula negation(Formula f);
  static Formula conjunction(std::vector<Formula> fs);
  static Formula disjunction(std::vector<Formula> fs);
  static Formula exists(std::vector<Binder> bs, Formula body);
  static Formula forall(std::vector<Binder> bs, Formula body);

  friend bool operator==(const Formula&, const Formula&) = default;
};

Formula parse(std::string_view text);
Term parse_term(std::string_view text);

// Canonical text; parse(print(f)) == f for every AST.
std::string print(const Formula& f);
std::string print(const Term& t);

std::set<std::string> free_variables(const Formula& f);
std::set<std::string> free_variables(const Term& t);

using SortEnv = std::map<std::string, std::vector<GroupElem>, std::less<>>;
using ParamEnv = std::map<std::string, GroupElem, std::less<>>;
using Assignment = std::map<std::string, GroupElem, std::less<>>;

bool eval(const GroupCtx& ctx, const Formula& f, const SortEnv& sorts, const ParamEnv& params,
          const Assignment& free = {});

GroupElem eval_term(const GroupCtx& ctx, const Term& t, const ParamEnv& params, const Assignment& vars);

// First assignment of the root quantifier's binders that makes the body
// true, in sort enumeration order (first binder outermost).
std::optional<Assignment> find_witness(const GroupCtx& ctx, const Formula& f, const SortEnv& sorts,
                                       const ParamEnv& params, const Assignment& free = {});

enum class Strategy {
  Auto,    // Image when the formula admits it, Filter otherwise
  Filter,  // eval on every candidate tuple
  Image,   // forward enumeration of existential witnesses
};

using Tuple = std::vector<GroupElem>;

// {tuples over `vars` satisfying f}. Candidates are per-variable carriers
// and are needed only by Filter; Image results are intersected with them
// when supplied. Output is sorted and duplicate free.
std::vector<Tuple> define_relation(const GroupCtx& ctx, const Formula& f, const std::vector<std::string>& vars,
                                   const std::vector<std::vector<GroupElem>>* candidates, const SortEnv& sorts,
                                   const ParamEnv& params, Strategy strategy = Strategy::Auto,
                                   std::size_t jobs = 1);

std::vector<GroupElem> define_set(const GroupCtx& ctx, const Formula& f, const std::string& var,
                                  const std::vector<GroupElem>* candidates, const SortEnv& sorts,
                                  const ParamEnv& params, Strategy strategy = Strategy::Auto,
                                  std::size_t jobs = 1);

// True when every disjunct is an existential conjunction that defines each
// of `vars` by an equation in previously bound names.
bool image_applicable(const Formula& f, const std::vector<std::string>& vars);

// Straight structural recursion over the AST with a name -> value map. Kept
// free of every optimisation in eval so the two can be compared.
bool reference_eval(const GroupCtx& ctx, const Formula& f, const SortEnv& sorts, const ParamEnv& params,
                    const Assignment& free);

struct Vocabulary {
  std::vector<std::string> vars;    // free variables available at top level
  std::vector<std::string> binders; // names for quantified variables
  std::vector<std::string> params;
  std::vector<std::string> sorts;
};

// Random formula of quantifier/connective depth <= max_depth. Variables are
// drawn from those in scope, so the result is closed relative to vocab.vars.
Formula random_formula(std::mt19937_64& rng, const Vocabulary& vocab, int max_depth);

// Random AST without scope discipline, for syntax round trips.
Formula random_syntax(std::mt19937_64& rng, int max_depth);

}  // namespace bilab::fo
