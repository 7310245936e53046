#include <algorithm>
#include <bit>
#include <memory>
#include <unordered_set>

#include "bilab/errors.hpp"
#include "bilab/formula.hpp"
#include "bilab/parallel.hpp"

namespace bilab::fo {

namespace {

using MemberSet = std::unordered_set<GroupElem, GroupElemHash>;

struct TNode {
  Term::Kind op = Term::Kind::One;
  int a = -1, b = -1;
  int slot = -1;   // Var bound to a slot
  int alias = -1;  // Var standing for another node's value (image plans)
  GroupElem value; // Param, One
};

struct FNode {
  Formula::Kind kind = Formula::Kind::Eq;
  int t0 = -1, t1 = -1;
  const MemberSet* members = nullptr;
  std::vector<int> kids;
  // Quantifiers: body parts sorted by level, where the level of a part is
  // the 1-based position of the last own binder it mentions. Parts with
  // level <= L occupy kids[0, level_end[L]).
  std::vector<int> level_end;
  std::vector<int> bslots;
  std::vector<const std::vector<GroupElem>*> bsorts;
  std::size_t max_level = 0;
};

class Program {
 public:
  Program(const GroupCtx& ctx, const SortEnv& sorts, const ParamEnv& params)
      : ctx_(ctx), sorts_(sorts), params_(params) {}

  const GroupCtx& ctx() const { return ctx_; }
  int slot_count() const { return slots_; }
  const TNode& tnode(int id) const { return tnodes_[id]; }
  std::size_t tnode_count() const { return tnodes_.size(); }
  const FNode& fnode(int id) const { return fnodes_[id]; }

  int bind(const std::string& name) {
    scope_.push_back({name, slots_});
    return slots_++;
  }
  void unbind(std::size_t n) { scope_.resize(scope_.size() - n); }

  int lookup(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == name) return it->second;
    }
    throw BindingError("unbound variable '" + name + "'");
  }

  const std::vector<GroupElem>& sort(const std::string& name) const {
    auto it = sorts_.find(name);
    if (it == sorts_.end()) throw BindingError("unknown sort '" + name + "'");
    return it->second;
  }

  const MemberSet* members(const std::string& name) {
    auto it = members_.find(name);
    if (it != members_.end()) return it->second.get();
    const auto& s = sort(name);
    auto set = std::make_unique<MemberSet>(s.begin(), s.end());
    return members_.emplace(name, std::move(set)).first->second.get();
  }

  int term(const Term& t, const std::map<std::string, int>* aliases = nullptr) {
    TNode n;
    n.op = t.kind;
    switch (t.kind) {
      case Term::Kind::Var:
        if (aliases) {
          if (auto it = aliases->find(t.name); it != aliases->end()) {
            n.alias = it->second;
            break;
          }
        }
        n.slot = lookup(t.name);
        break;
      case Term::Kind::Param: {
        auto it = params_.find(t.name);
        if (it == params_.end()) throw BindingError("unbound parameter '$" + t.name + "'");
        n.value = it->second;
        break;
      }
      case Term::Kind::One:
        n.value = ctx_.identity();
        break;
      case Term::Kind::Inverse:
        n.a = term(t.args[0], aliases);
        break;
      case Term::Kind::Product:
      case Term::Kind::Conj:
        n.a = term(t.args[0], aliases);
        n.b = term(t.args[1], aliases);
        break;
    }
    tnodes_.push_back(std::move(n));
    return static_cast<int>(tnodes_.size() - 1);
  }

  int formula(const Formula& f) {
    using K = Formula::Kind;
    FNode n;
    n.kind = f.kind;
    switch (f.kind) {
      case K::Eq:
        n.t0 = term(f.terms[0]);
        n.t1 = term(f.terms[1]);
        break;
      case K::InSort:
        n.t0 = term(f.terms[0]);
        n.members = members(f.sort);
        break;
      case K::Not:
      case K::And:
      case K::Or:
        for (const auto& c : f.children) n.kids.push_back(formula(c));
        break;
      case K::Exists:
      case K::Forall:
        quantifier(f, n);
        break;
    }
    fnodes_.push_back(std::move(n));
    return static_cast<int>(fnodes_.size() - 1);
  }

 private:
  void quantifier(const Formula& f, FNode& n) {
    for (const auto& b : f.binders) {
      n.bsorts.push_back(&sort(b.sort));
      n.bslots.push_back(bind(b.var));
    }
    const Formula& body = f.children[0];
    K split = f.kind == K::Exists ? K::And : K::Or;
    std::vector<const Formula*> parts;
    if (body.kind == split) {
      for (const auto& c : body.children) parts.push_back(&c);
    } else {
      parts.push_back(&body);
    }
    std::vector<std::pair<std::size_t, int>> leveled;
    for (const Formula* p : parts) {
      std::size_t level = 0;
      for (const auto& v : free_variables(*p)) {
        for (std::size_t j = f.binders.size(); j-- > 0;) {
          if (f.binders[j].var == v) {
            level = std::max(level, j + 1);
            break;
          }
        }
      }
      leveled.emplace_back(level, formula(*p));
    }
    unbind(f.binders.size());
    std::stable_sort(leveled.begin(), leveled.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    n.level_end.assign(f.binders.size() + 1, 0);
    for (const auto& [level, id] : leveled) {
      n.kids.push_back(id);
      n.max_level = std::max(n.max_level, level);
      for (std::size_t l = level; l < n.level_end.size(); ++l) ++n.level_end[l];
    }
  }

  using K = Formula::Kind;

  const GroupCtx& ctx_;
  const SortEnv& sorts_;
  const ParamEnv& params_;
  std::vector<TNode> tnodes_;
  std::vector<FNode> fnodes_;
  std::vector<std::pair<std::string, int>> scope_;
  int slots_ = 0;
  std::map<std::string, std::unique_ptr<MemberSet>, std::less<>> members_;
};

class Machine {
 public:
  explicit Machine(const Program& p) : p_(p), slots_(p.slot_count()) {}

  std::vector<GroupElem>& slots() { return slots_; }

  GroupElem term(int id) {
    const TNode& n = p_.tnode(id);
    const GroupCtx& ctx = p_.ctx();
    switch (n.op) {
      case Term::Kind::Var:
        return slots_[n.slot];
      case Term::Kind::Param:
      case Term::Kind::One:
        return n.value;
      case Term::Kind::Product:
        return ctx.mul(term(n.a), term(n.b));
      case Term::Kind::Inverse:
        return ctx.inv(term(n.a));
      case Term::Kind::Conj:
        return ctx.conj(term(n.a), term(n.b));
    }
    return n.value;
  }

  bool formula(int id) {
    using K = Formula::Kind;
    const FNode& n = p_.fnode(id);
    switch (n.kind) {
      case K::Eq:
        return term(n.t0) == term(n.t1);
      case K::InSort:
        return n.members->count(term(n.t0)) > 0;
      case K::Not:
        return !formula(n.kids[0]);
      case K::And:
        for (int k : n.kids) {
          if (!formula(k)) return false;
        }
        return true;
      case K::Or:
        for (int k : n.kids) {
          if (formula(k)) return true;
        }
        return false;
      case K::Exists: {
        for (const auto* s : n.bsorts) {
          if (s->empty()) return false;
        }
        if (!level_all(n, 0) || !exists_from(n, 0)) return false;
        for (std::size_t j = n.max_level; j < n.bslots.size(); ++j) slots_[n.bslots[j]] = n.bsorts[j]->front();
        return true;
      }
      case K::Forall: {
        for (const auto* s : n.bsorts) {
          if (s->empty()) return true;
        }
        return level_any(n, 0) || forall_from(n, 0);
      }
    }
    return false;
  }

 private:
  std::size_t level_begin(const FNode& n, std::size_t level) const { return level ? n.level_end[level - 1] : 0; }

  bool level_all(const FNode& n, std::size_t level) {
    for (std::size_t i = level_begin(n, level); i < static_cast<std::size_t>(n.level_end[level]); ++i) {
      if (!formula(n.kids[i])) return false;
    }
    return true;
  }

  bool level_any(const FNode& n, std::size_t level) {
    for (std::size_t i = level_begin(n, level); i < static_cast<std::size_t>(n.level_end[level]); ++i) {
      if (formula(n.kids[i])) return true;
    }
    return false;
  }

  bool exists_from(const FNode& n, std::size_t level) {
    if (level == n.max_level) return true;
    for (const auto& g : *n.bsorts[level]) {
      slots_[n.bslots[level]] = g;
      if (level_all(n, level + 1) && exists_from(n, level + 1)) return true;
    }
    return false;
  }

  bool forall_from(const FNode& n, std::size_t level) {
    if (level == n.max_level) return false;
    for (const auto& g : *n.bsorts[level]) {
      slots_[n.bslots[level]] = g;
      if (level_any(n, level + 1)) continue;
      if (!forall_from(n, level + 1)) return false;
    }
    return true;
  }

  const Program& p_;
  std::vector<GroupElem> slots_;
};

// Interns tuples as packed element ids.
class TupleSink {
 public:
  explicit TupleSink(std::size_t arity) : arity_(arity), bits_(arity ? 64 / arity : 64) {}

  std::uint32_t intern(const GroupElem& g) {
    auto [it, fresh] = ids_.try_emplace(g, static_cast<std::uint32_t>(elems_.size()));
    if (fresh) elems_.push_back(g);
    return it->second;
  }

  void add(const std::vector<std::uint32_t>& ids) {
    std::uint64_t key = 0;
    bool packable = bits_ >= 21;
    for (std::uint32_t id : ids) {
      if (bits_ < 64 && (static_cast<std::uint64_t>(id) >> bits_) != 0) packable = false;
      key = bits_ < 64 ? (key << bits_) | id : id;
    }
    if (packable) {
      packed_.insert(key);
    } else {
      wide_.insert(ids);
    }
  }

  void append_to(std::vector<Tuple>& out) const {
    for (std::uint64_t key : packed_) {
      Tuple t(arity_);
      for (std::size_t i = arity_; i-- > 0;) {
        std::uint64_t id = bits_ < 64 ? key & ((std::uint64_t{1} << bits_) - 1) : key;
        t[i] = elems_[id];
        if (bits_ < 64) key >>= bits_;
      }
      out.push_back(std::move(t));
    }
    for (const auto& ids : wide_) {
      Tuple t;
      for (auto id : ids) t.push_back(elems_[id]);
      out.push_back(std::move(t));
    }
  }

 private:
  std::size_t arity_;
  unsigned bits_;
  std::unordered_map<GroupElem, std::uint32_t, GroupElemHash> ids_;
  std::vector<GroupElem> elems_;
  std::unordered_set<std::uint64_t> packed_;
  std::set<std::vector<std::uint32_t>> wide_;
};

struct Shape {
  std::vector<Binder> binders;
  std::vector<const Formula*> conjuncts;
  std::vector<std::pair<std::size_t, std::size_t>> defs;  // (target, conjunct) in definition order
  std::vector<std::size_t> def_side;                      // side holding the defining term
  std::vector<bool> is_def;                               // per conjunct
};

std::vector<const Formula*> disjuncts(const Formula& f) {
  std::vector<const Formula*> out;
  if (f.kind == Formula::Kind::Or) {
    for (const auto& c : f.children) out.push_back(&c);
  } else {
    out.push_back(&f);
  }
  return out;
}

std::optional<Shape> analyze(const Formula& d, const std::vector<std::string>& vars) {
  Shape s;
  const Formula* body = &d;
  while (body->kind == Formula::Kind::Exists) {
    s.binders.insert(s.binders.end(), body->binders.begin(), body->binders.end());
    body = &body->children[0];
  }
  if (s.binders.size() > 63) return std::nullopt;
  std::set<std::string> known;
  for (const auto& b : s.binders) {
    if (std::find(vars.begin(), vars.end(), b.var) != vars.end()) return std::nullopt;
    known.insert(b.var);
  }
  if (std::set<std::string>(vars.begin(), vars.end()).size() != vars.size()) return std::nullopt;
  if (body->kind == Formula::Kind::And) {
    for (const auto& c : body->children) s.conjuncts.push_back(&c);
  } else {
    s.conjuncts.push_back(body);
  }
  s.is_def.assign(s.conjuncts.size(), false);
  std::vector<bool> defined(vars.size(), false);
  for (bool progress = true; progress;) {
    progress = false;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (defined[i]) continue;
      for (std::size_t c = 0; c < s.conjuncts.size() && !defined[i]; ++c) {
        const Formula& e = *s.conjuncts[c];
        if (s.is_def[c] || e.kind != Formula::Kind::Eq) continue;
        for (std::size_t side = 0; side < 2; ++side) {
          const Term& lhs = e.terms[side];
          if (lhs.kind != Term::Kind::Var || lhs.name != vars[i]) continue;
          auto fv = free_variables(e.terms[1 - side]);
          if (!std::includes(known.begin(), known.end(), fv.begin(), fv.end())) continue;
          defined[i] = true;
          s.is_def[c] = true;
          s.defs.emplace_back(i, c);
          s.def_side.push_back(1 - side);
          known.insert(vars[i]);
          progress = true;
          break;
        }
      }
    }
  }
  if (std::find(defined.begin(), defined.end(), false) != defined.end()) return std::nullopt;
  return s;
}

// One existential disjunct compiled for forward enumeration. Term nodes are
// hoisted to the outermost binder level they depend on, and nodes depending
// on a single binder are tabulated once per value of that binder.
struct ImagePlan {
  std::vector<int> bslots;
  std::vector<const std::vector<GroupElem>*> bsorts;
  std::vector<int> def_node;                   // per target
  std::vector<std::uint64_t> dep;              // per term node
  std::vector<std::vector<int>> level_nodes;   // levels 0..n
  std::vector<std::vector<int>> level_targets;
  std::vector<std::vector<int>> level_filters;
  std::vector<int> memo_binder;                // per term node, -1 if not tabulated
  std::size_t emit_level = 0;
  std::size_t node_begin = 0, node_end = 0;
};

int level_of(std::uint64_t dep) { return dep ? 64 - std::countl_zero(dep) : 0; }

ImagePlan compile_plan(Program& prog, const Shape& shape, const std::vector<std::string>& vars) {
  ImagePlan plan;
  for (const auto& b : shape.binders) {
    plan.bsorts.push_back(&prog.sort(b.sort));
    plan.bslots.push_back(prog.bind(b.var));
  }
  std::size_t n = shape.binders.size();
  plan.level_nodes.resize(n + 1);
  plan.level_targets.resize(n + 1);
  plan.level_filters.resize(n + 1);
  plan.node_begin = prog.tnode_count();

  std::map<std::string, int> aliases;
  plan.def_node.assign(vars.size(), -1);
  for (std::size_t k = 0; k < shape.defs.size(); ++k) {
    auto [target, c] = shape.defs[k];
    int id = prog.term(shape.conjuncts[c]->terms[shape.def_side[k]], &aliases);
    plan.def_node[target] = id;
    aliases[vars[target]] = id;
  }
  plan.node_end = prog.tnode_count();

  plan.dep.assign(plan.node_end, 0);
  plan.memo_binder.assign(plan.node_end, -1);
  for (std::size_t id = plan.node_begin; id < plan.node_end; ++id) {
    const TNode& t = prog.tnode(static_cast<int>(id));
    std::uint64_t d = 0;
    if (t.alias >= 0) {
      d = plan.dep[t.alias];
    } else if (t.slot >= 0) {
      for (std::size_t j = n; j-- > 0;) {
        if (plan.bslots[j] == t.slot) {
          d = std::uint64_t{1} << j;
          break;
        }
      }
    }
    if (t.a >= 0) d |= plan.dep[t.a];
    if (t.b >= 0) d |= plan.dep[t.b];
    plan.dep[id] = d;
    plan.level_nodes[level_of(d)].push_back(static_cast<int>(id));
    if (std::popcount(d) == 1 && t.op != Term::Kind::Var) plan.memo_binder[id] = std::countr_zero(d);
  }

  std::vector<std::uint64_t> target_dep(vars.size(), 0);
  for (std::size_t i = 0; i < vars.size(); ++i) {
    target_dep[i] = plan.dep[plan.def_node[i]];
    plan.level_targets[level_of(target_dep[i])].push_back(static_cast<int>(i));
    plan.emit_level = std::max<std::size_t>(plan.emit_level, level_of(target_dep[i]));
  }
  for (std::size_t c = 0; c < shape.conjuncts.size(); ++c) {
    if (shape.is_def[c]) continue;
    std::uint64_t d = 0;
    for (const auto& v : free_variables(*shape.conjuncts[c])) {
      bool found = false;
      for (std::size_t j = n; j-- > 0 && !found;) {
        if (shape.binders[j].var == v) {
          d |= std::uint64_t{1} << j;
          found = true;
        }
      }
      for (std::size_t i = 0; i < vars.size() && !found; ++i) {
        if (vars[i] == v) {
          d |= target_dep[i];
          found = true;
        }
      }
    }
    int id = prog.formula(*shape.conjuncts[c]);
    plan.level_filters[level_of(d)].push_back(id);
    plan.emit_level = std::max<std::size_t>(plan.emit_level, level_of(d));
  }
  prog.unbind(n);
  return plan;
}

GroupElem compute_node(const Program& prog, const TNode& n, const std::vector<GroupElem>& cache,
                       const std::vector<GroupElem>& slots) {
  const GroupCtx& ctx = prog.ctx();
  switch (n.op) {
    case Term::Kind::Var:
      return n.alias >= 0 ? cache[n.alias] : slots[n.slot];
    case Term::Kind::Param:
    case Term::Kind::One:
      return n.value;
    case Term::Kind::Product:
      return ctx.mul(cache[n.a], cache[n.b]);
    case Term::Kind::Inverse:
      return ctx.inv(cache[n.a]);
    case Term::Kind::Conj:
      return ctx.conj(cache[n.a], cache[n.b]);
  }
  return n.value;
}

class ImageRunner {
 public:
  ImageRunner(const Program& prog, const ImagePlan& plan, const std::vector<int>& target_slots,
              const std::vector<std::vector<GroupElem>>& memo, const std::vector<GroupElem>& base_cache,
              TupleSink& sink)
      : prog_(prog), plan_(plan), target_slots_(target_slots), memo_(memo), machine_(prog),
        cache_(base_cache), sink_(sink), ids_(target_slots.size()) {}

  Machine& machine() { return machine_; }

  // Levels up to 0 are already applied to the cache.
  bool apply_level0() {
    for (int t : plan_.level_targets[0]) set_target(t);
    for (int f : plan_.level_filters[0]) {
      if (!machine_.formula(f)) return false;
    }
    return true;
  }

  void run(std::size_t first_begin, std::size_t first_end) {
    if (plan_.emit_level == 0) {
      emit();
      return;
    }
    descend(0, first_begin, first_end);
  }

 private:
  void descend(std::size_t level, std::size_t begin, std::size_t end) {
    if (level == plan_.emit_level) {
      emit();
      return;
    }
    const auto& sort = *plan_.bsorts[level];
    auto& slots = machine_.slots();
    const int slot = plan_.bslots[level];
    const auto& nodes = plan_.level_nodes[level + 1];
    const auto& targets = plan_.level_targets[level + 1];
    const auto& filters = plan_.level_filters[level + 1];
    for (std::size_t idx = begin; idx < end; ++idx) {
      slots[slot] = sort[idx];
      for (int id : nodes) {
        if (plan_.memo_binder[id] >= 0) {
          cache_[id] = memo_[id][idx];
        } else {
          cache_[id] = compute(id);
        }
      }
      for (int t : targets) set_target(t);
      bool ok = true;
      for (int f : filters) {
        if (!machine_.formula(f)) {
          ok = false;
          break;
        }
      }
      if (ok) descend(level + 1, 0, level + 1 < plan_.bsorts.size() ? plan_.bsorts[level + 1]->size() : 0);
    }
  }

  GroupElem compute(int id) { return compute_node(prog_, prog_.tnode(id), cache_, machine_.slots()); }

  void set_target(int t) {
    const GroupElem& value = cache_[plan_.def_node[t]];
    machine_.slots()[target_slots_[t]] = value;
    ids_[t] = sink_.intern(value);
  }

  void emit() { sink_.add(ids_); }

  const Program& prog_;
  const ImagePlan& plan_;
  const std::vector<int>& target_slots_;
  const std::vector<std::vector<GroupElem>>& memo_;
  Machine machine_;
  std::vector<GroupElem> cache_;
  TupleSink& sink_;
  std::vector<std::uint32_t> ids_;
};

// Level-0 values go straight into `cache`; single-binder nodes get a table
// indexed by the position of the binder value in its sort.
void prime_cache(const Program& prog, const ImagePlan& plan, std::vector<GroupElem>& cache,
                 std::vector<std::vector<GroupElem>>& memo) {
  std::vector<GroupElem> slots(prog.slot_count());
  for (int id : plan.level_nodes[0]) cache[id] = compute_node(prog, prog.tnode(id), cache, slots);
  for (std::size_t j = 0; j < plan.bslots.size(); ++j) {
    std::vector<int> nodes;
    for (std::size_t id = plan.node_begin; id < plan.node_end; ++id) {
      if (plan.dep[id] == (std::uint64_t{1} << j)) nodes.push_back(static_cast<int>(id));
    }
    bool any_memo = false;
    for (int id : nodes) any_memo |= plan.memo_binder[id] >= 0;
    if (!any_memo) continue;
    const auto& sort = *plan.bsorts[j];
    for (int id : nodes) {
      if (plan.memo_binder[id] >= 0) memo[id].resize(sort.size());
    }
    for (std::size_t idx = 0; idx < sort.size(); ++idx) {
      slots[plan.bslots[j]] = sort[idx];
      for (int id : nodes) {
        cache[id] = compute_node(prog, prog.tnode(id), cache, slots);
        if (plan.memo_binder[id] >= 0) memo[id][idx] = cache[id];
      }
    }
  }
}

void sort_unique(std::vector<Tuple>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<Tuple> image_relation(const GroupCtx& ctx, const Formula& f, const std::vector<std::string>& vars,
                                  const SortEnv& sorts, const ParamEnv& params, std::size_t jobs) {
  Program prog(ctx, sorts, params);
  std::vector<int> target_slots;
  for (const auto& v : vars) target_slots.push_back(prog.bind(v));
  std::vector<Shape> shapes;
  std::vector<ImagePlan> plans;
  for (const Formula* d : disjuncts(f)) {
    auto shape = analyze(*d, vars);
    if (!shape) throw BindingError("formula does not admit image enumeration");
    shapes.push_back(std::move(*shape));
  }
  for (const auto& s : shapes) plans.push_back(compile_plan(prog, s, vars));

  std::vector<Tuple> out;
  for (const auto& plan : plans) {
    bool empty = false;
    for (const auto* s : plan.bsorts) empty |= s->empty();
    if (empty) continue;
    std::vector<GroupElem> cache(prog.tnode_count());
    std::vector<std::vector<GroupElem>> memo(prog.tnode_count());
    prime_cache(prog, plan, cache, memo);
    std::size_t first = plan.emit_level ? plan.bsorts[0]->size() : 1;
    std::size_t chunks = chunk_count(first, jobs);
    std::vector<std::vector<Tuple>> parts(chunks);
    parallel_chunks(first, chunks, [&](std::size_t c, std::size_t begin, std::size_t end) {
      TupleSink sink(vars.size());
      ImageRunner runner(prog, plan, target_slots, memo, cache, sink);
      if (!runner.apply_level0()) return;
      runner.run(begin, end);
      sink.append_to(parts[c]);
    });
    for (auto& p : parts) {
      out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
    }
  }
  sort_unique(out);
  return out;
}

std::vector<Tuple> filter_relation(const GroupCtx& ctx, const Formula& f, const std::vector<std::string>& vars,
                                   const std::vector<std::vector<GroupElem>>& candidates, const SortEnv& sorts,
                                   const ParamEnv& params, std::size_t jobs) {
  Program prog(ctx, sorts, params);
  std::vector<int> target_slots;
  for (const auto& v : vars) target_slots.push_back(prog.bind(v));
  int root = prog.formula(f);
  const std::size_t k = vars.size();
  if (k == 0) {
    Machine m(prog);
    return m.formula(root) ? std::vector<Tuple>{Tuple{}} : std::vector<Tuple>{};
  }
  for (const auto& c : candidates) {
    if (c.empty()) return {};
  }
  std::size_t first = candidates[0].size();
  std::size_t chunks = chunk_count(first, jobs);
  std::vector<std::vector<Tuple>> parts(chunks);
  parallel_chunks(first, chunks, [&](std::size_t c, std::size_t begin, std::size_t end) {
    Machine m(prog);
    std::vector<std::size_t> idx(k, 0);
    idx[0] = begin;
    while (idx[0] < end) {
      for (std::size_t i = 0; i < k; ++i) m.slots()[target_slots[i]] = candidates[i][idx[i]];
      if (m.formula(root)) {
        Tuple t(k);
        for (std::size_t i = 0; i < k; ++i) t[i] = candidates[i][idx[i]];
        parts[c].push_back(std::move(t));
      }
      for (std::size_t i = k; i-- > 0;) {
        if (++idx[i] < candidates[i].size() || i == 0) break;
        idx[i] = 0;
      }
    }
  });
  std::vector<Tuple> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  sort_unique(out);
  return out;
}

std::vector<int> bind_free(Program& prog, const Assignment& free) {
  std::vector<int> slots;
  for (const auto& [name, value] : free) slots.push_back(prog.bind(name));
  return slots;
}

void load_free(Machine& m, const std::vector<int>& slots, const Assignment& free) {
  std::size_t i = 0;
  for (const auto& [name, value] : free) m.slots()[slots[i++]] = value;
}

}  // namespace

bool eval(const GroupCtx& ctx, const Formula& f, const SortEnv& sorts, const ParamEnv& params,
          const Assignment& free) {
  Program prog(ctx, sorts, params);
  auto slots = bind_free(prog, free);
  int root = prog.formula(f);
  Machine m(prog);
  load_free(m, slots, free);
  return m.formula(root);
}

GroupElem eval_term(const GroupCtx& ctx, const Term& t, const ParamEnv& params, const Assignment& vars) {
  SortEnv none;
  Program prog(ctx, none, params);
  auto slots = bind_free(prog, vars);
  int root = prog.term(t);
  Machine m(prog);
  load_free(m, slots, vars);
  return m.term(root);
}

std::optional<Assignment> find_witness(const GroupCtx& ctx, const Formula& f, const SortEnv& sorts,
                                       const ParamEnv& params, const Assignment& free) {
  if (f.kind != Formula::Kind::Exists) throw DomainError("find_witness needs an existential formula");
  Program prog(ctx, sorts, params);
  auto slots = bind_free(prog, free);
  int root = prog.formula(f);
  Machine m(prog);
  load_free(m, slots, free);
  if (!m.formula(root)) return std::nullopt;
  Assignment out;
  const FNode& q = prog.fnode(root);
  for (std::size_t j = 0; j < f.binders.size(); ++j) out[f.binders[j].var] = m.slots()[q.bslots[j]];
  return out;
}

bool image_applicable(const Formula& f, const std::vector<std::string>& vars) {
  for (const Formula* d : disjuncts(f)) {
    if (!analyze(*d, vars)) return false;
  }
  return true;
}

std::vector<Tuple> define_relation(const GroupCtx& ctx, const Formula& f, const std::vector<std::string>& vars,
                                   const std::vector<std::vector<GroupElem>>* candidates, const SortEnv& sorts,
                                   const ParamEnv& params, Strategy strategy, std::size_t jobs) {
  auto fv = free_variables(f);
  for (const auto& v : fv) {
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) throw BindingError("unbound variable '" + v + "'");
  }
  if (candidates && candidates->size() != vars.size()) throw BindingError("one candidate carrier per variable");
  if (strategy == Strategy::Auto) strategy = image_applicable(f, vars) ? Strategy::Image : Strategy::Filter;
  if (strategy == Strategy::Filter) {
    if (!candidates) throw BindingError("filter evaluation needs candidate carriers");
    return filter_relation(ctx, f, vars, *candidates, sorts, params, jobs);
  }
  auto out = image_relation(ctx, f, vars, sorts, params, jobs);
  if (candidates) {
    std::vector<MemberSet> member;
    for (const auto& c : *candidates) member.emplace_back(c.begin(), c.end());
    std::erase_if(out, [&](const Tuple& t) {
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (!member[i].count(t[i])) return true;
      }
      return false;
    });
  }
  return out;
}

std::vector<GroupElem> define_set(const GroupCtx& ctx, const Formula& f, const std::string& var,
                                  const std::vector<GroupElem>* candidates, const SortEnv& sorts,
                                  const ParamEnv& params, Strategy strategy, std::size_t jobs) {
  std::vector<std::vector<GroupElem>> cands;
  if (candidates) cands.push_back(*candidates);
  auto rel = define_relation(ctx, f, {var}, candidates ? &cands : nullptr, sorts, params, strategy, jobs);
  std::vector<GroupElem> out;
  out.reserve(rel.size());
  for (auto& t : rel) out.push_back(std::move(t[0]));
  return out;
}

}  // namespace bilab::fo
