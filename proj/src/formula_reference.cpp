#include "bilab/errors.hpp"
#include "bilab/formula.hpp"

namespace bilab::fo {

namespace {

GroupElem ref_term(const GroupCtx& ctx, const Term& t, const ParamEnv& params, const Assignment& env) {
  switch (t.kind) {
    case Term::Kind::Var: {
      auto it = env.find(t.name);
      if (it == env.end()) throw BindingError("unbound variable '" + t.name + "'");
      return it->second;
    }
    case Term::Kind::Param: {
      auto it = params.find(t.name);
      if (it == params.end()) throw BindingError("unbound parameter '$" + t.name + "'");
      return it->second;
    }
    case Term::Kind::One:
      return ctx.identity();
    case Term::Kind::Product:
      return ctx.mul(ref_term(ctx, t.args[0], params, env), ref_term(ctx, t.args[1], params, env));
    case Term::Kind::Inverse:
      return ctx.inv(ref_term(ctx, t.args[0], params, env));
    case Term::Kind::Conj:
      return ctx.conj(ref_term(ctx, t.args[0], params, env), ref_term(ctx, t.args[1], params, env));
  }
  return ctx.identity();
}

const std::vector<GroupElem>& ref_sort(const SortEnv& sorts, const std::string& name) {
  auto it = sorts.find(name);
  if (it == sorts.end()) throw BindingError("unknown sort '" + name + "'");
  return it->second;
}

bool ref_eval(const GroupCtx& ctx, const Formula& f, const SortEnv& sorts, const ParamEnv& params,
              const Assignment& env);

bool ref_quant(const GroupCtx& ctx, const Formula& f, const SortEnv& sorts, const ParamEnv& params,
               Assignment env, std::size_t j) {
  bool ex = f.kind == Formula::Kind::Exists;
  if (j == f.binders.size()) return ref_eval(ctx, f.children[0], sorts, params, env);
  for (const auto& g : ref_sort(sorts, f.binders[j].sort)) {
    env[f.binders[j].var] = g;
    bool r = ref_quant(ctx, f, sorts, params, env, j + 1);
    if (r == ex) return ex;
  }
  return !ex;
}

bool ref_eval(const GroupCtx& ctx, const Formula& f, const SortEnv& sorts, const ParamEnv& params,
              const Assignment& env) {
  switch (f.kind) {
    case Formula::Kind::Eq:
      return ref_term(ctx, f.terms[0], params, env) == ref_term(ctx, f.terms[1], params, env);
    case Formula::Kind::InSort: {
      GroupElem g = ref_term(ctx, f.terms[0], params, env);
      for (const auto& x : ref_sort(sorts, f.sort)) {
        if (x == g) return true;
      }
      return false;
    }
    case Formula::Kind::Not:
      return !ref_eval(ctx, f.children[0], sorts, params, env);
    case Formula::Kind::And: {
      bool r = true;
      for (const auto& c : f.children) r = ref_eval(ctx, c, sorts, params, env) && r;
      return r;
    }
    case Formula::Kind::Or: {
      bool r = false;
      for (const auto& c : f.children) r = ref_eval(ctx, c, sorts, params, env) || r;
      return r;
    }
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      for (const auto& b : f.binders) ref_sort(sorts, b.sort);
      return ref_quant(ctx, f, sorts, params, env, 0);
  }
  return false;
}

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

int roll(std::mt19937_64& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

Term gen_term(std::mt19937_64& rng, const std::vector<std::string>& scope, const Vocabulary& vocab, int depth) {
  if (depth <= 0 || roll(rng, 3) == 0) {
    int r = roll(rng, 6);
    if (r < 3 && !scope.empty()) return Term::var(pick(rng, scope));
    if (r < 5 && !vocab.params.empty()) return Term::param(pick(rng, vocab.params));
    if (!scope.empty() && r < 5) return Term::var(pick(rng, scope));
    return Term::one();
  }
  switch (roll(rng, 3)) {
    case 0:
      return Term::product(gen_term(rng, scope, vocab, depth - 1), gen_term(rng, scope, vocab, depth - 1));
    case 1:
      return Term::inverse(gen_term(rng, scope, vocab, depth - 1));
    default:
      return Term::conj(gen_term(rng, scope, vocab, depth - 1), gen_term(rng, scope, vocab, depth - 1));
  }
}

Formula gen_atom(std::mt19937_64& rng, const std::vector<std::string>& scope, const Vocabulary& vocab) {
  if (!vocab.sorts.empty() && roll(rng, 4) == 0) return Formula::in_sort(gen_term(rng, scope, vocab, 2), pick(rng, vocab.sorts));
  return Formula::eq(gen_term(rng, scope, vocab, 2), gen_term(rng, scope, vocab, 2));
}

Formula gen_formula(std::mt19937_64& rng, std::vector<std::string> scope, const Vocabulary& vocab, int depth) {
  if (depth <= 0) return gen_atom(rng, scope, vocab);
  int r = roll(rng, vocab.binders.empty() || vocab.sorts.empty() ? 4 : 6);
  switch (r) {
    case 0:
      return gen_atom(rng, scope, vocab);
    case 1:
      return Formula::negation(gen_formula(rng, scope, vocab, depth - 1));
    case 2:
    case 3: {
      std::vector<Formula> kids;
      int n = 2 + roll(rng, 2);
      for (int i = 0; i < n; ++i) kids.push_back(gen_formula(rng, scope, vocab, depth - 1));
      return r == 2 ? Formula::conjunction(std::move(kids)) : Formula::disjunction(std::move(kids));
    }
    default: {
      std::vector<Binder> bs;
      int n = 1 + roll(rng, 2);
      for (int i = 0; i < n; ++i) {
        bs.push_back({pick(rng, vocab.binders), pick(rng, vocab.sorts)});
        scope.push_back(bs.back().var);
      }
      Formula body = gen_formula(rng, scope, vocab, depth - 1);
      return r == 4 ? Formula::exists(std::move(bs), std::move(body)) : Formula::forall(std::move(bs), std::move(body));
    }
  }
}

const std::vector<std::string> kSyntaxNames = {"g", "x", "y1", "z_2", "Hx", "exists_"};
const std::vector<std::string> kSyntaxSorts = {"G", "H", "U01", "S"};

Term syntax_term(std::mt19937_64& rng, int depth) {
  if (depth <= 0 || roll(rng, 3) == 0) {
    switch (roll(rng, 3)) {
      case 0: return Term::var(pick(rng, kSyntaxNames));
      case 1: return Term::param(pick(rng, kSyntaxNames));
      default: return Term::one();
    }
  }
  switch (roll(rng, 3)) {
    case 0: return Term::product(syntax_term(rng, depth - 1), syntax_term(rng, depth - 1));
    case 1: return Term::inverse(syntax_term(rng, depth - 1));
    default: return Term::conj(syntax_term(rng, depth - 1), syntax_term(rng, depth - 1));
  }
}

}  // namespace

bool reference_eval(const GroupCtx& ctx, const Formula& f, const SortEnv& sorts, const ParamEnv& params,
                    const Assignment& free) {
  return ref_eval(ctx, f, sorts, params, free);
}

Formula random_formula(std::mt19937_64& rng, const Vocabulary& vocab, int max_depth) {
  return gen_formula(rng, vocab.vars, vocab, max_depth);
}

Formula random_syntax(std::mt19937_64& rng, int max_depth) {
  if (max_depth <= 0 || roll(rng, 4) == 0) {
    if (roll(rng, 3) == 0) return Formula::in_sort(syntax_term(rng, 3), pick(rng, kSyntaxSorts));
    return Formula::eq(syntax_term(rng, 3), syntax_term(rng, 3));
  }
  int r = roll(rng, 5);
  switch (r) {
    case 0:
      return Formula::negation(random_syntax(rng, max_depth - 1));
    case 1:
    case 2: {
      std::vector<Formula> kids;
      int n = 2 + roll(rng, 3);
      for (int i = 0; i < n; ++i) kids.push_back(random_syntax(rng, max_depth - 1));
      return r == 1 ? Formula::conjunction(std::move(kids)) : Formula::disjunction(std::move(kids));
    }
    default: {
      std::vector<Binder> bs;
      int n = 1 + roll(rng, 3);
      for (int i = 0; i < n; ++i) bs.push_back({pick(rng, kSyntaxNames), pick(rng, kSyntaxSorts)});
      Formula body = random_syntax(rng, max_depth - 1);
      return r == 3 ? Formula::exists(std::move(bs), std::move(body)) : Formula::forall(std::move(bs), std::move(body));
    }
  }
}

}  // namespace bilab::fo
