#include "bilab/interp_sl2.hpp"

#include <algorithm>

#include "bilab/errors.hpp"

namespace bilab {

DefinabilityReport compare_sets(std::string name, std::vector<GroupElem> computed, std::vector<GroupElem> oracle) {
  std::sort(computed.begin(), computed.end());
  computed.erase(std::unique(computed.begin(), computed.end()), computed.end());
  std::sort(oracle.begin(), oracle.end());
  oracle.erase(std::unique(oracle.begin(), oracle.end()), oracle.end());
  DefinabilityReport r;
  r.name = std::move(name);
  r.computed_size = computed.size();
  r.oracle_size = oracle.size();
  std::vector<GroupElem> extra, missing;
  std::set_difference(computed.begin(), computed.end(), oracle.begin(), oracle.end(), std::back_inserter(extra));
  std::set_difference(oracle.begin(), oracle.end(), computed.begin(), computed.end(), std::back_inserter(missing));
  for (auto* part : {&extra, &missing}) {
    for (const auto& g : *part) {
      if (r.counterexamples.size() < 10) r.counterexamples.push_back(g);
    }
  }
  r.equal = extra.empty() && missing.empty();
  return r;
}

namespace formulas {

std::string p_formula(std::size_t s_size) {
  std::string out;
  for (std::size_t i = 0; i < s_size; ++i) {
    for (std::size_t j = 0; j < s_size; ++j) {
      std::string s = "$us_" + std::to_string(i);
      std::string t = "$us_" + std::to_string(j);
      std::string st = "$ust_" + std::to_string(i) + "_" + std::to_string(j);
      if (!out.empty()) out += " or ";
      out += "(exists z:H, r:H, x:H, y:H . y1 = $u ^ z * ($u ^ r) ^-1 * " + t + " and y2 = $u ^ x * ($u ^ y) ^-1 * " +
             s + " and y3 = y1 ^ x * (y1 ^ y) ^-1 * (" + s + " ^ z * (" + s + " ^ r) ^-1 * " + st + "))";
    }
  }
  return out;
}

}  // namespace formulas

namespace {

// Matrix that is the identity on components where pick[i] is false and w
// where it is true.
Mat2 componentwise_w(const ProductRing& ring, const std::vector<bool>& pick) {
  std::size_t n = ring.num_components();
  std::vector<std::uint32_t> a(n), b(n), c(n), d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& comp = ring.component(i);
    if (pick[i]) {
      b[i] = 1;
      c[i] = comp.neg(1);
    } else {
      a[i] = d[i] = 1;
    }
  }
  return {RingElem(a), RingElem(b), RingElem(c), RingElem(d)};
}

}  // namespace

Sl2Interp::Sl2Interp(const GroupCtx& ctx, Options options)
    : ctx_(ctx), options_(options), solver_(ctx.ring()) {
  const auto& ring = ctx_.ring();
  for (const auto& r : ring.elements()) {
    GroupElem y = ctx_.make_u(r);
    u_elems_.push_back(y);
    u_index_.emplace(y, r);
    v_index_.emplace(ctx_.make_v(r), r);
  }
  for (const auto& r : ring.units()) h_index_.emplace(ctx_.make_h(r), r);
  std::size_t n = ring.num_components();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<bool> pick(n);
    for (std::size_t i = 0; i < n; ++i) pick[i] = (mask >> i) & 1;
    w_index_.emplace(ctx_.make(componentwise_w(ring, pick)), mask);
  }
  w_inv_ = ctx_.inv(ctx_.w());
}

std::vector<GroupElem> Sl2Interp::v_oracle() const {
  std::vector<GroupElem> out;
  for (const auto& r : ring().elements()) out.push_back(ctx_.make_v(r));
  return out;
}

std::vector<GroupElem> Sl2Interp::h_oracle() const {
  std::vector<GroupElem> out;
  for (const auto& r : ring().units()) out.push_back(ctx_.make_h(r));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<GroupElem> Sl2Interp::w_oracle() const {
  std::vector<GroupElem> out;
  for (const auto& [g, mask] : w_index_) out.push_back(g);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<GroupElem> Sl2Interp::s_elems() const {
  std::vector<GroupElem> out;
  for (const auto& s : s_set().elements) out.push_back(ctx_.make_u(s));
  return out;
}

std::vector<GroupElem> Sl2Interp::u01_oracle() const {
  std::vector<GroupElem> out;
  for (const auto& r : ring().elements()) {
    bool ok = true;
    for (std::size_t i = 0; i < r.size(); ++i) ok &= r[i] <= 1;
    if (ok) out.push_back(ctx_.make_u(r));
  }
  return out;
}

fo::ParamEnv Sl2Interp::params() const {
  fo::ParamEnv p;
  p["h"] = ctx_.h_tau();
  p["u"] = ctx_.u();
  p["v"] = ctx_.v();
  p["w"] = ctx_.w();
  const auto& s = s_set().elements;
  for (std::size_t i = 0; i < s.size(); ++i) {
    p["us_" + std::to_string(i)] = ctx_.make_u(s[i]);
    for (std::size_t j = 0; j < s.size(); ++j) {
      p["ust_" + std::to_string(i) + "_" + std::to_string(j)] = ctx_.make_u(ring().mul(s[i], s[j]));
    }
  }
  return p;
}

std::optional<RingElem> Sl2Interp::decode(const GroupElem& y) const {
  auto it = u_index_.find(y);
  if (it == u_index_.end()) return std::nullopt;
  return it->second;
}

GroupElem Sl2Interp::star_mul(const GroupElem& y1, const GroupElem& y2) const {
  auto beta = decode(y1);
  auto alpha = decode(y2);
  if (!beta || !alpha) throw DomainError("star_mul: operand outside U");
  const auto& ring = this->ring();
  SquareDiffWitness a = solver_.decompose(*alpha);
  SquareDiffWitness b = solver_.decompose(*beta);
  GroupElem x = ctx_.make_h(a.xi), y = ctx_.make_h(a.eta);
  GroupElem z = ctx_.make_h(b.xi), r = ctx_.make_h(b.eta);
  GroupElem us = ctx_.make_u(a.s);
  GroupElem ust = ctx_.make_u(ring.mul(a.s, b.s));
  GroupElem out = ctx_.mul(ctx_.conj(y1, x), ctx_.inv(ctx_.conj(y1, y)));
  out = ctx_.mul(out, ctx_.conj(us, z));
  out = ctx_.mul(out, ctx_.inv(ctx_.conj(us, r)));
  out = ctx_.mul(out, ust);
  if (out != ctx_.make_u(ring.mul(*beta, *alpha))) {
    throw DecompositionError("star_mul: witness product differs from u(beta alpha)");
  }
  if (options_.corrupt_star) out = ctx_.mul(out, ctx_.u());
  return out;
}

bool Sl2Interp::gamma1_member(const GroupElem& g) const { return ring().is_unit(g.rep().a); }

VHU Sl2Interp::vhu_decompose(const GroupElem& g) const {
  if (!gamma1_member(g)) throw DomainError("vhu_decompose: (1,1) entry is not a unit");
  const auto& ring = this->ring();
  const Mat2& m = g.rep();
  RingElem ai = ring.inv(m.a);
  VHU out{ctx_.make_v(ring.neg(ring.mul(ai, m.c))), ctx_.make_h(ai), ctx_.make_u(ring.mul(ai, m.b))};
  if (ctx_.mul(ctx_.mul(out.v, out.h), out.u) != g) throw DecompositionError("vhu_decompose: product differs");
  return out;
}

GroupElem Sl2Interp::choose_w_twist(const GroupElem& g) const {
  const auto& ring = this->ring();
  const Mat2& m = g.rep();
  std::vector<bool> pick(ring.num_components());
  for (std::size_t i = 0; i < pick.size(); ++i) {
    const auto& comp = ring.component(i);
    if (comp.is_unit(m.a[i])) continue;
    if (!comp.is_unit(m.b[i])) {
      throw UnsupportedRingError("choose_w_twist: a and b both non-units in component " + std::to_string(i));
    }
    pick[i] = true;
  }
  GroupElem x = ctx_.make(componentwise_w(ring, pick));
  if (!gamma1_member(ctx_.mul(g, x))) throw DecompositionError("choose_w_twist: g x is not in Gamma_1");
  return x;
}

MatU Sl2Interp::theta_direct(const GroupElem& g) const {
  const Mat2& m = g.rep();
  return {encode(m.a), encode(m.b), encode(m.c), encode(m.d)};
}

std::pair<GroupElem, GroupElem> Sl2Interp::h_witness(const GroupElem& g) const {
  {
    std::lock_guard lock(h_memo_mutex_);
    if (auto it = h_memo_.find(g); it != h_memo_.end()) return it->second;
  }
  // g = y4^w y1 w^-1 y4 determines y1 from y4.
  for (const auto& y4 : u_elems_) {
    GroupElem y1 = ctx_.mul(ctx_.mul(ctx_.mul(ctx_.inv(ctx_.conj(y4, ctx_.w())), g), ctx_.inv(y4)), ctx_.w());
    if (!in_u(y1) || star_mul(y4, y1) != ctx_.u()) continue;
    std::lock_guard lock(h_memo_mutex_);
    h_memo_.emplace(g, std::pair{y1, y4});
    return {y1, y4};
  }
  throw DomainError("theta_restricted: no H witness for " + to_string(g));
}

MatU Sl2Interp::theta_restricted(const GroupElem& g) const {
  const GroupElem& one = ctx_.identity();
  const GroupElem& u = ctx_.u();
  if (in_u(g)) return {u, g, one, u};
  if (in_v(g)) return {u, one, ctx_.inv(ctx_.conj(g, ctx_.w())), u};
  if (in_h(g)) {
    auto [y1, y4] = h_witness(g);
    return {y1, one, one, y4};
  }
  if (in_w(g)) {
    GroupElem t = vhu_decompose(ctx_.conj(u, g)).u;
    return {t, ctx_.mul(ctx_.inv(t), u), ctx_.mul(ctx_.inv(u), t), t};
  }
  throw DomainError("theta_restricted: argument outside U, V, H and W");
}

MatU Sl2Interp::matu_mul(const MatU& x, const MatU& y) const {
  auto dot = [&](const GroupElem& p, const GroupElem& q, const GroupElem& r, const GroupElem& s) {
    return ctx_.mul(star_mul(p, q), star_mul(r, s));
  };
  return {dot(x.a, y.a, x.b, y.c), dot(x.a, y.b, x.b, y.d), dot(x.c, y.a, x.d, y.c), dot(x.c, y.b, x.d, y.d)};
}

MatU Sl2Interp::matu_adj(const MatU& x) const { return {x.d, ctx_.inv(x.b), ctx_.inv(x.c), x.a}; }

GroupElem Sl2Interp::matu_det(const MatU& x) const {
  return ctx_.mul(star_mul(x.a, x.d), ctx_.inv(star_mul(x.b, x.c)));
}

MatU Sl2Interp::theta_definable(const GroupElem& g) const {
  GroupElem x = choose_w_twist(g);
  VHU parts = vhu_decompose(ctx_.mul(g, x));
  MatU a = matu_mul(matu_mul(theta_restricted(parts.v), theta_restricted(parts.h)), theta_restricted(parts.u));
  MatU xt = theta_restricted(x);
  if (matu_det(xt) != ctx_.u()) throw DecompositionError("theta_definable: det of x theta is not one");
  return matu_mul(a, matu_adj(xt));
}

Mat2 Sl2Interp::matu_decode(const MatU& x) const {
  auto entry = [&](const GroupElem& y) {
    auto r = decode(y);
    if (!r) throw DomainError("matu_decode: entry outside U");
    return *r;
  };
  return {entry(x.a), entry(x.b), entry(x.c), entry(x.d)};
}

bool Sl2Interp::represents(const MatU& x, const GroupElem& g) const {
  return quotient_equiv(ring(), matu_decode(x), g.rep(), ctx_.quotient());
}

RingElem Sl2Interp::roundtrip_ring(const RingElem& r) const {
  auto back = decode(encode(r));
  if (!back) throw DomainError("roundtrip_ring: u(r) not decodable");
  return *back;
}

GroupElem Sl2Interp::roundtrip_group(const GroupElem& g) const { return ctx_.make(matu_decode(theta_definable(g))); }

DefinableSets::DefinableSets(const Sl2Interp& interp, std::size_t jobs) : interp_(interp), jobs_(jobs) {}

const GroupCarrier& DefinableSets::carrier() const {
  std::call_once(carrier_.once, [&] { carrier_.value = std::make_unique<GroupCarrier>(interp_.ctx()); });
  return *carrier_.value;
}

const std::vector<GroupElem>& DefinableSets::H() const {
  std::call_once(h_.once, [&] { h_.value = carrier().centralizer(interp_.ctx().h_tau()); });
  return h_.value;
}

const std::vector<GroupElem>& DefinableSets::U() const {
  std::call_once(u_.once, [&] {
    fo::SortEnv sorts{{"H", H()}, {"S", named("S")}};
    u_.value = fo::define_set(interp_.ctx(), fo::parse(formulas::kU), "g", nullptr, sorts, interp_.params(),
                              fo::Strategy::Image, jobs_);
  });
  return u_.value;
}

const std::vector<GroupElem>& DefinableSets::V() const {
  std::call_once(v_.once, [&] {
    fo::SortEnv sorts{{"U", U()}};
    v_.value = fo::define_set(interp_.ctx(), fo::parse(formulas::kV), "g", nullptr, sorts, interp_.params(),
                              fo::Strategy::Image, jobs_);
  });
  return v_.value;
}

const std::vector<fo::Tuple>& DefinableSets::P() const {
  std::call_once(p_.once, [&] {
    fo::SortEnv sorts{{"H", H()}};
    p_.value = fo::define_relation(interp_.ctx(), fo::parse(formulas::p_formula(interp_.s_set().size())),
                                   {"y1", "y2", "y3"}, nullptr, sorts, interp_.params(), fo::Strategy::Image, jobs_);
  });
  return p_.value;
}

const std::vector<GroupElem>& DefinableSets::U01() const {
  std::call_once(u01_.once, [&] {
    for (const auto& t : P()) {
      if (t[0] == t[1] && t[1] == t[2]) u01_.value.push_back(t[0]);
    }
  });
  return u01_.value;
}

const std::vector<GroupElem>& DefinableSets::W() const {
  std::call_once(w_.once, [&] {
    fo::SortEnv sorts{{"U01", U01()}};
    w_.value = fo::define_set(interp_.ctx(), fo::parse(formulas::kW), "g", nullptr, sorts, interp_.params(),
                              fo::Strategy::Image, jobs_);
  });
  return w_.value;
}

const std::vector<GroupElem>& DefinableSets::Gamma1() const {
  std::call_once(gamma1_.once, [&] {
    fo::SortEnv sorts{{"V", V()}, {"H", H()}, {"U", U()}};
    gamma1_.value = fo::define_set(interp_.ctx(), fo::parse(formulas::kGamma1), "g", nullptr, sorts,
                                   interp_.params(), fo::Strategy::Image, jobs_);
  });
  return gamma1_.value;
}

const std::vector<GroupElem>& DefinableSets::named(std::string_view name) const {
  if (name == "G") return carrier().elements();
  if (name == "S") {
    std::call_once(s_.once, [&] { s_.value = interp_.s_elems(); });
    return s_.value;
  }
  if (name == "H") return H();
  if (name == "U") return U();
  if (name == "V") return V();
  if (name == "W") return W();
  if (name == "U01") return U01();
  if (name == "Gamma1") return Gamma1();
  throw ConfigError("unknown carrier '" + std::string(name) + "' (G, S, H, U, V, W, U01, Gamma1)");
}

TildeChecker::TildeChecker(const Sl2Interp& interp)
    : interp_(interp), u_(interp.u_oracle()), v_(interp.v_oracle()), h_(interp.h_oracle()) {
  const GroupCtx& ctx = interp.ctx();
  for (const auto& y : u_) {
    for (const auto& z : h_) {
      uh_.emplace(ctx.mul(y, z), 0);
      hu_.emplace(ctx.mul(z, y), 0);
    }
  }
  for (const auto& z : h_) {
    for (const auto& x : v_) hv_.emplace(ctx.mul(z, x), 0);
  }
  for (const auto& x : v_) {
    for (const auto& z : h_) {
      GroupElem xz = ctx.mul(x, z);
      for (const auto& y : u_) vzu_[ctx.mul(xz, y)].push_back(z);
    }
  }
  for (auto& [g, zs] : vzu_) {
    std::sort(zs.begin(), zs.end());
    zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
  }
}

std::vector<GroupElem> TildeChecker::v_part(const GroupElem& g) const {
  const GroupCtx& ctx = interp_.ctx();
  GroupElem gi = ctx.inv(g);
  std::vector<GroupElem> out;
  for (const auto& x : v_) {
    if (uh_.count(ctx.mul(gi, x))) out.push_back(x);
  }
  return out;
}

std::vector<GroupElem> TildeChecker::u_part(const GroupElem& g) const {
  const GroupCtx& ctx = interp_.ctx();
  GroupElem gi = ctx.inv(g);
  std::vector<GroupElem> out;
  for (const auto& y : u_) {
    if (hv_.count(ctx.mul(y, gi))) out.push_back(y);
  }
  return out;
}

std::vector<GroupElem> TildeChecker::h_part(const GroupElem& g) const {
  auto it = vzu_.find(g);
  return it == vzu_.end() ? std::vector<GroupElem>{} : it->second;
}

std::vector<GroupElem> TildeChecker::v_part_literal(const GroupElem& g) const {
  const GroupCtx& ctx = interp_.ctx();
  GroupElem gi = ctx.inv(g);
  std::vector<GroupElem> out;
  for (const auto& x : v_) {
    if (hu_.count(ctx.mul(x, gi))) out.push_back(x);
  }
  return out;
}

}  // namespace bilab
