#include "bilab/sl3.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_set>

#include "bilab/errors.hpp"
#include "bilab/kernels.hpp"

namespace bilab {

std::string_view root_name(Root r) {
  switch (r) {
    case Root::A1: return "a1";
    case Root::A2: return "a2";
    case Root::A12: return "a1+a2";
    case Root::NegA1: return "-a1";
    case Root::NegA2: return "-a2";
    case Root::NegA12: return "-a1-a2";
  }
  return "?";
}

bool is_positive(Root r) { return r == Root::A1 || r == Root::A2 || r == Root::A12; }

Root negate(Root r) {
  switch (r) {
    case Root::A1: return Root::NegA1;
    case Root::A2: return Root::NegA2;
    case Root::A12: return Root::NegA12;
    case Root::NegA1: return Root::A1;
    case Root::NegA2: return Root::A2;
    case Root::NegA12: return Root::A12;
  }
  return r;
}

std::pair<int, int> root_position(Root r) {
  switch (r) {
    case Root::A1: return {0, 1};
    case Root::A2: return {1, 2};
    case Root::A12: return {0, 2};
    case Root::NegA1: return {1, 0};
    case Root::NegA2: return {2, 1};
    case Root::NegA12: return {2, 0};
  }
  return {0, 0};
}

std::string to_string(const Mat3& m) {
  std::string out = "(";
  for (int i = 0; i < 3; ++i) {
    if (i) out += ";";
    for (int j = 0; j < 3; ++j) {
      if (j) out += ",";
      out += to_string(m(i, j));
    }
  }
  return out + ")";
}

std::size_t Mat3Hash::operator()(const Mat3& m) const noexcept {
  std::size_t h = 0;
  for (const auto& e : m.e) h = h * 0x9e3779b97f4a7c15ull ^ e.hash();
  return h;
}

Sl3Ctx::Sl3Ctx(ProductRing ring) : ring_(std::move(ring)) {
  for (auto& e : identity_.e) e = ring_.zero();
  for (int i = 0; i < 3; ++i) identity_(i, i) = ring_.one();
}

Mat3 Sl3Ctx::mul(const Mat3& x, const Mat3& y) const {
  Mat3 r = identity_;
  for (std::size_t c = 0; c < ring_.num_components(); ++c) {
    const LocalRing& L = ring_.component(c);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        std::uint32_t s = L.mul(x(i, 0)[c], y(0, j)[c]);
        s = L.add(s, L.mul(x(i, 1)[c], y(1, j)[c]));
        s = L.add(s, L.mul(x(i, 2)[c], y(2, j)[c]));
        r(i, j)[c] = s;
      }
    }
  }
  return r;
}

namespace {

RingElem minor2(const ProductRing& R, const Mat3& m, int r0, int r1, int c0, int c1) {
  return R.sub(R.mul(m(r0, c0), m(r1, c1)), R.mul(m(r0, c1), m(r1, c0)));
}

}  // namespace

RingElem Sl3Ctx::det(const Mat3& x) const {
  const auto& R = ring_;
  RingElem d = R.mul(x(0, 0), minor2(R, x, 1, 2, 1, 2));
  d = R.sub(d, R.mul(x(0, 1), minor2(R, x, 1, 2, 0, 2)));
  return R.add(d, R.mul(x(0, 2), minor2(R, x, 1, 2, 0, 1)));
}

Mat3 Sl3Ctx::inv(const Mat3& x) const {
  Mat3 r = identity_;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      // adj(x)(i, j) = (-1)^(i+j) * minor of x without row j and column i
      int r0 = j == 0 ? 1 : 0, r1 = j == 2 ? 1 : 2;
      int c0 = i == 0 ? 1 : 0, c1 = i == 2 ? 1 : 2;
      RingElem m = minor2(ring_, x, r0, r1, c0, c1);
      r(i, j) = (i + j) % 2 ? ring_.neg(m) : m;
    }
  }
  return r;
}

Mat3 Sl3Ctx::conj(const Mat3& g, const Mat3& x) const { return mul(mul(inv(x), g), x); }

Mat3 Sl3Ctx::make(const Mat3& m) const {
  for (const auto& e : m.e) ring_.check(e);
  if (det(m) != ring_.one()) throw DomainError("matrix " + to_string(m) + " does not have determinant 1");
  return m;
}

Mat3 Sl3Ctx::x_root(Root r, const RingElem& t) const {
  Mat3 m = identity_;
  auto [i, j] = root_position(r);
  m(i, j) = t;
  return m;
}

Mat3 Sl3Ctx::phi(Root alpha, const Mat2& m) const {
  if (!is_positive(alpha)) throw DomainError("phi: root must be positive");
  auto [i, j] = root_position(alpha);
  Mat3 r = identity_;
  r(i, i) = m.a;
  r(i, j) = m.b;
  r(j, i) = m.c;
  r(j, j) = m.d;
  return r;
}

std::vector<RingElem> Sl3Ctx::centre_scalars() const {
  std::vector<RingElem> out;
  for (const auto& l : ring_.units()) {
    if (ring_.mul(ring_.mul(l, l), l) == ring_.one()) out.push_back(l);
  }
  return out;
}

namespace {

using Local3 = std::array<std::uint32_t, 9>;

std::vector<Local3> local_sl3(const LocalRing& L) {
  const std::uint32_t m = L.modulus();
  const std::size_t block = static_cast<std::size_t>(m) * m * m * m * m * m;
  std::array<std::vector<std::uint32_t>, 9> cols;
  for (auto& c : cols) c.resize(block);
  for (std::size_t k = 0; k < block; ++k) {
    std::size_t rest = k;
    for (int e = 8; e >= 3; --e) {
      cols[e][k] = static_cast<std::uint32_t>(rest % m);
      rest /= m;
    }
  }
  std::vector<std::uint8_t> mask(block);
  std::vector<Local3> out;
  kernels::Soa3 soa;
  for (int e = 0; e < 9; ++e) soa[e] = cols[e].data();
  for (std::uint32_t a = 0; a < m; ++a) {
    for (std::uint32_t b = 0; b < m; ++b) {
      for (std::uint32_t c = 0; c < m; ++c) {
        std::fill(cols[0].begin(), cols[0].end(), a);
        std::fill(cols[1].begin(), cols[1].end(), b);
        std::fill(cols[2].begin(), cols[2].end(), c);
        kernels::det3_is_one(soa, block, m, mask.data());
        for (std::size_t k = 0; k < block; ++k) {
          if (!mask[k]) continue;
          Local3 t;
          for (int e = 0; e < 9; ++e) t[e] = cols[e][k];
          out.push_back(t);
        }
      }
    }
  }
  return out;
}

}  // namespace

std::vector<Mat3> Sl3Ctx::enumerate() const {
  double n = static_cast<double>(ring_.cardinality());
  if (std::pow(n, 9) > kSl3EnumerationLimit) {
    throw TooLargeError("SL3 enumeration over " + ring_.descriptor() + " exceeds the |R|^9 <= 2e7 guard; use a " +
                        "single small prime field such as 5");
  }
  std::vector<std::vector<Local3>> local;
  for (const auto& c : ring_.components()) local.push_back(local_sl3(c));
  std::vector<Mat3> out;
  std::vector<std::size_t> idx(local.size(), 0);
  Mat3 m = identity_;
  while (true) {
    for (std::size_t c = 0; c < local.size(); ++c) {
      const auto& t = local[c][idx[c]];
      for (int e = 0; e < 9; ++e) m.e[e][c] = t[e];
    }
    out.push_back(m);
    std::size_t i = local.size();
    while (i > 0 && ++idx[i - 1] == local[i - 1].size()) idx[--i] = 0;
    if (i == 0) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

Mat3 Sl3Ctx::random_element(std::mt19937_64& rng) const {
  Mat3 m = identity_;
  for (std::size_t c = 0; c < ring_.num_components(); ++c) {
    const LocalRing& L = ring_.component(c);
    std::uniform_int_distribution<std::uint32_t> dist(0, L.modulus() - 1);
    while (true) {
      for (auto& e : m.e) e[c] = dist(rng);
      auto at = [&](int i, int j) { return m(i, j)[c]; };
      auto mn = [&](int r0, int r1, int c0, int c1) {
        return L.sub(L.mul(at(r0, c0), at(r1, c1)), L.mul(at(r0, c1), at(r1, c0)));
      };
      std::uint32_t d = L.mul(at(0, 0), mn(1, 2, 1, 2));
      d = L.sub(d, L.mul(at(0, 1), mn(1, 2, 0, 2)));
      d = L.add(d, L.mul(at(0, 2), mn(1, 2, 0, 1)));
      if (d == 1 % L.modulus()) break;
    }
  }
  return m;
}

Sl3Carrier::Sl3Carrier(const Sl3Ctx& ctx, std::vector<Mat3> elements) : ctx_(ctx), elements_(std::move(elements)) {
  const std::size_t comps = ctx_.ring().num_components();
  soa_.resize(comps);
  for (auto& c : soa_) {
    for (auto& e : c) e.resize(elements_.size());
  }
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    for (std::size_t c = 0; c < comps; ++c) {
      for (int e = 0; e < 9; ++e) soa_[c][e][i] = elements_[i].e[e][c];
    }
  }
}

void Sl3Carrier::and_commute_mask(const Mat3& g, std::vector<std::uint8_t>& mask) const {
  std::vector<std::uint8_t> part(elements_.size());
  for (std::size_t c = 0; c < soa_.size(); ++c) {
    kernels::Soa3 soa;
    kernels::Fixed3 fixed;
    for (int e = 0; e < 9; ++e) {
      soa[e] = soa_[c][e].data();
      fixed[e] = g.e[e][c];
    }
    kernels::commute3(soa, elements_.size(), fixed, fixed, ctx_.ring().component(c).modulus(), part.data());
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] &= part[i];
  }
}

std::vector<Mat3> Sl3Carrier::centralizer(const Mat3& g) const { return commuting_with_all({g}); }

std::vector<Mat3> Sl3Carrier::commuting_with_all(const std::vector<Mat3>& gens) const {
  std::vector<std::uint8_t> mask(elements_.size(), 1);
  for (const auto& g : gens) and_commute_mask(g, mask);
  std::vector<Mat3> out;
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (mask[i]) out.push_back(elements_[i]);
  }
  return out;
}

Sl3Report compare_sets3(std::string name, std::vector<Mat3> computed, std::vector<Mat3> oracle) {
  std::sort(computed.begin(), computed.end());
  computed.erase(std::unique(computed.begin(), computed.end()), computed.end());
  std::sort(oracle.begin(), oracle.end());
  oracle.erase(std::unique(oracle.begin(), oracle.end()), oracle.end());
  Sl3Report r;
  r.name = std::move(name);
  r.computed_size = computed.size();
  r.oracle_size = oracle.size();
  std::vector<Mat3> extra, missing;
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

std::vector<Mat3> k_subgroup(const Sl3Ctx& ctx, Root alpha) {
  GroupCtx sl2(ctx.ring(), QuotientKind::Trivial);
  std::vector<Mat3> out;
  for (const auto& g : sl2.enumerate()) out.push_back(ctx.phi(alpha, g.rep()));
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void check_klemma_size(const Sl3Ctx& ctx) {
  if (std::pow(static_cast<double>(ctx.ring().cardinality()), 8) > kKlemmaLimit) {
    throw TooLargeError("alternating product over " + ctx.ring().descriptor() +
                        " exceeds the |R|^8 <= 1e7 guard; use a single-component ring such as 5");
  }
}

// Slot k uses the root -alpha for even k and alpha for odd k.
std::array<std::vector<Mat3>, 2> klemma_factors(const Sl3Ctx& ctx, Root alpha) {
  std::array<std::vector<Mat3>, 2> f;
  for (const auto& r : ctx.ring().elements()) {
    f[0].push_back(ctx.x_root(negate(alpha), r));
    f[1].push_back(ctx.x_root(alpha, r));
  }
  return f;
}

}  // namespace

std::vector<Mat3> klemma_products(const Sl3Ctx& ctx, Root alpha) {
  check_klemma_size(ctx);
  auto f = klemma_factors(ctx, alpha);
  std::unordered_set<Mat3, Mat3Hash> seen;
  std::function<void(int, const Mat3&)> rec = [&](int k, const Mat3& acc) {
    if (k == 8) {
      seen.insert(acc);
      return;
    }
    for (const auto& x : f[k % 2]) rec(k + 1, ctx.mul(acc, x));
  };
  rec(0, ctx.identity());
  std::vector<Mat3> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::array<RingElem, 8>> klemma_witness(const Sl3Ctx& ctx, Root alpha, const Mat3& target) {
  check_klemma_size(ctx);
  auto f = klemma_factors(ctx, alpha);
  auto elems = ctx.ring().elements();
  std::array<std::size_t, 8> idx{};
  std::function<bool(int, const Mat3&)> rec = [&](int k, const Mat3& acc) {
    if (k == 8) return acc == target;
    for (std::size_t i = 0; i < elems.size(); ++i) {
      idx[k] = i;
      if (rec(k + 1, ctx.mul(acc, f[k % 2][i]))) return true;
    }
    return false;
  };
  if (!rec(0, ctx.identity())) return std::nullopt;
  std::array<RingElem, 8> out;
  for (int k = 0; k < 8; ++k) out[k] = elems[idx[k]];
  return out;
}

Sl3Report verify_klemma(const Sl3Ctx& ctx, Root alpha) {
  return compare_sets3("klemma", klemma_products(ctx, alpha), k_subgroup(ctx, alpha));
}

std::vector<Mat3> centre_oracle(const Sl3Ctx& ctx) {
  std::vector<Mat3> out;
  for (const auto& l : ctx.centre_scalars()) {
    Mat3 m = ctx.identity();
    for (int i = 0; i < 3; ++i) m(i, i) = l;
    out.push_back(m);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Mat3> centre_by_scan(const Sl3Ctx& ctx, const Sl3Carrier& group) {
  std::vector<Mat3> gens;
  for (Root r : kRoots) gens.push_back(ctx.x_root(r, ctx.ring().one()));
  return group.commuting_with_all(gens);
}

Sl3Report verify_centralizer_identity(const Sl3Ctx& ctx, const Sl3Carrier& group, Root alpha) {
  Mat3 ua = ctx.x_root(alpha, ctx.ring().one());
  std::vector<Mat3> c = group.centralizer(ua);
  Sl3Carrier c_carrier(ctx, c);
  std::vector<Mat3> zc = c_carrier.commuting_with_all(c);
  std::vector<Mat3> oracle;
  for (const auto& z : centre_oracle(ctx)) {
    for (const auto& r : ctx.ring().elements()) oracle.push_back(ctx.mul(ctx.x_root(alpha, r), z));
  }
  Sl3Report rep = compare_sets3("centralizer-identity", std::move(zc), std::move(oracle));
  rep.auxiliary_size = c.size();
  return rep;
}

namespace {

struct Ring2 {
  RingElem a, b, c, d;
};

class WidthBuilder {
 public:
  explicit WidthBuilder(const Sl3Ctx& ctx) : ctx_(ctx), R_(ctx.ring()) {}

  void add(Root r, const RingElem& t) {
    if (t != R_.zero()) out_.factors.push_back({r, t});
  }

  // h(xi) = v(xi) u(xi^-1) v(xi) u(-1) v(-1) u(-1), pushed through phi_alpha
  // with u(r) -> x_alpha(r) and v(l) -> x_-alpha(-l).
  void torus(Root alpha, const RingElem& xi) {
    if (xi == R_.one()) return;
    RingElem one = R_.one(), m1 = R_.neg(one);
    u_or_v(alpha, false, xi);
    u_or_v(alpha, true, R_.inv(xi));
    u_or_v(alpha, false, xi);
    u_or_v(alpha, true, m1);
    u_or_v(alpha, false, m1);
    u_or_v(alpha, true, m1);
  }

  void u_or_v(Root alpha, bool is_u, const RingElem& t) {
    if (is_u) {
      add(alpha, t);
    } else {
      add(negate(alpha), R_.neg(t));
    }
  }

  WidthDecomposition take() { return std::move(out_); }

 private:
  const Sl3Ctx& ctx_;
  const ProductRing& R_;
  WidthDecomposition out_;
};

// Per component, the first (s, t) in lexicographic order with
// a + s b + t c a unit.
std::pair<RingElem, RingElem> unit_pivot(const ProductRing& R, const RingElem& a, const RingElem& b,
                                         const RingElem& c) {
  RingElem s = R.zero(), t = R.zero();
  for (std::size_t i = 0; i < R.num_components(); ++i) {
    const LocalRing& L = R.component(i);
    bool found = false;
    for (std::uint32_t x = 0; x < L.modulus() && !found; ++x) {
      for (std::uint32_t y = 0; y < L.modulus() && !found; ++y) {
        if (L.is_unit(L.add(a[i], L.add(L.mul(x, b[i]), L.mul(y, c[i]))))) {
          s[i] = x;
          t[i] = y;
          found = true;
        }
      }
    }
    if (!found) throw UnsupportedRingError("width_decompose: no unit pivot in component " + std::to_string(i));
  }
  return {s, t};
}

}  // namespace

WidthDecomposition width_decompose(const Sl3Ctx& ctx, const Mat3& g) {
  const ProductRing& R = ctx.ring();
  WidthBuilder out(ctx);

  // (i) unit in position (1,1) by adding rows 2 and 3 to row 1.
  auto [s, t] = unit_pivot(R, g(0, 0), g(1, 0), g(2, 0));
  Mat3 g1 = ctx.mul(ctx.mul(ctx.x_root(Root::A1, s), ctx.x_root(Root::A12, t)), g);
  RingElem a = g1(0, 0);
  RingElem ai = R.inv(a);

  // (ii) clear column 1 on the left and row 1 on the right.
  RingElem c2 = R.neg(R.mul(g1(1, 0), ai)), c3 = R.neg(R.mul(g1(2, 0), ai));
  Mat3 g2 = ctx.mul(ctx.mul(ctx.x_root(Root::NegA12, c3), ctx.x_root(Root::NegA1, c2)), g1);
  RingElem r2 = R.neg(R.mul(g2(0, 1), ai)), r3 = R.neg(R.mul(g2(0, 2), ai));
  Mat3 g3 = ctx.mul(ctx.mul(g2, ctx.x_root(Root::A1, r2)), ctx.x_root(Root::A12, r3));

  // g = X^-1 C^-1 g3 Rm^-1
  out.add(Root::A12, R.neg(t));
  out.add(Root::A1, R.neg(s));
  out.add(Root::NegA1, R.neg(c2));
  out.add(Root::NegA12, R.neg(c3));

  // (iii) g3 = diag(a, B) = phi_a1(h(a^-1)) phi_a2(B') with B' = (a B_1; B_2).
  out.torus(Root::A1, ai);
  Ring2 b{R.mul(a, g3(1, 1)), R.mul(a, g3(1, 2)), g3(2, 1), g3(2, 2)};
  // B'' = u(s') B' has a unit (1,1) entry; B'' = v(mu) h(lambda) u(nu).
  RingElem sp = R.zero();
  for (std::size_t i = 0; i < R.num_components(); ++i) {
    const LocalRing& L = R.component(i);
    std::uint32_t x = 0;
    while (x < L.modulus() && !L.is_unit(L.add(b.a[i], L.mul(x, b.c[i])))) ++x;
    if (x == L.modulus()) throw UnsupportedRingError("width_decompose: SL2 block has no unit pivot");
    sp[i] = x;
  }
  Ring2 bb{R.add(b.a, R.mul(sp, b.c)), R.add(b.b, R.mul(sp, b.d)), b.c, b.d};
  RingElem lam = R.inv(bb.a);
  RingElem mu = R.neg(R.mul(lam, bb.c));
  RingElem nu = R.mul(lam, bb.b);
  out.u_or_v(Root::A2, true, R.neg(sp));
  out.u_or_v(Root::A2, false, mu);
  out.torus(Root::A2, lam);
  out.u_or_v(Root::A2, true, nu);

  out.add(Root::A12, R.neg(r3));
  out.add(Root::A1, R.neg(r2));

  WidthDecomposition d = out.take();
  if (reassemble(ctx, d) != g) throw DecompositionError("width_decompose: product differs from " + to_string(g));
  if (d.factors.size() > d.bound) throw DecompositionError("width_decompose: length exceeds bound");
  return d;
}

Mat3 reassemble(const Sl3Ctx& ctx, const WidthDecomposition& d) {
  Mat3 m = ctx.identity();
  for (const auto& f : d.factors) m = ctx.mul(m, ctx.x_root(f.root, f.param));
  return m;
}

namespace {

Mat2 h_mat(const ProductRing& R, const RingElem& xi) { return {R.inv(xi), R.zero(), R.zero(), xi}; }

}  // namespace

Sl3Theta::Sl3Theta(const Sl3Ctx& ctx, Root gamma) : ctx_(ctx), gamma_(gamma), solver_(ctx.ring()) {
  if (!is_positive(gamma)) throw DomainError("Sl3Theta: gamma must be a positive root");
  const ProductRing& R = ctx.ring();
  std::vector<Mat3> perms;
  std::array<int, 3> p{0, 1, 2};
  do {
    for (int signs = 0; signs < 8; ++signs) {
      Mat3 m = ctx.identity();
      for (int i = 0; i < 3; ++i) {
        m(i, i) = R.zero();
        m(i, p[i]) = (signs >> i) & 1 ? R.neg(R.one()) : R.one();
      }
      if (ctx.det(m) == R.one()) perms.push_back(m);
    }
  } while (std::next_permutation(p.begin(), p.end()));
  Mat3 plus = encode(R.one()), minus = encode(R.neg(R.one()));
  for (Root beta : kRoots) {
    Mat3 xb = ctx.x_root(beta, R.one());
    bool found = false;
    for (const auto& n : perms) {
      Mat3 y = ctx.conj(xb, n);
      if (y == plus || y == minus) {
        conj_[static_cast<int>(beta)] = n;
        sign_[static_cast<int>(beta)] = y == plus ? 1 : -1;
        found = true;
        break;
      }
    }
    if (!found) throw DecompositionError("Sl3Theta: no signed permutation moves the root subgroup");
  }
}

std::optional<RingElem> Sl3Theta::decode(const Mat3& x) const {
  auto [pi, pj] = root_position(gamma_);
  const ProductRing& R = ctx_.ring();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i == pi && j == pj) continue;
      if (x(i, j) != (i == j ? R.one() : R.zero())) return std::nullopt;
    }
  }
  return x(pi, pj);
}

Mat3 Sl3Theta::star(const Mat3& y1, const Mat3& y2) const {
  auto beta = decode(y1);
  auto alpha = decode(y2);
  if (!beta || !alpha) throw DomainError("star: operand outside U_gamma");
  const ProductRing& R = ctx_.ring();
  SquareDiffWitness a = solver_.decompose(*alpha);
  SquareDiffWitness b = solver_.decompose(*beta);
  Mat3 x = ctx_.phi(gamma_, h_mat(R, a.xi)), y = ctx_.phi(gamma_, h_mat(R, a.eta));
  Mat3 z = ctx_.phi(gamma_, h_mat(R, b.xi)), r = ctx_.phi(gamma_, h_mat(R, b.eta));
  Mat3 us = encode(a.s);
  Mat3 out = ctx_.mul(ctx_.conj(y1, x), ctx_.inv(ctx_.conj(y1, y)));
  out = ctx_.mul(out, ctx_.conj(us, z));
  out = ctx_.mul(out, ctx_.inv(ctx_.conj(us, r)));
  out = ctx_.mul(out, encode(R.mul(a.s, b.s)));
  if (out != encode(R.mul(*beta, *alpha))) throw DecompositionError("star: witness product differs");
  return out;
}

InterpMat3 Sl3Theta::direct(const Mat3& g) const {
  InterpMat3 out;
  for (int k = 0; k < 9; ++k) out[k] = encode(g.e[k]);
  return out;
}

InterpMat3 Sl3Theta::restricted(Root beta, const RingElem& t) const {
  const ProductRing& R = ctx_.ring();
  InterpMat3 out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out[3 * i + j] = encode(i == j ? R.one() : R.zero());
  }
  Mat3 y = ctx_.conj(ctx_.x_root(beta, t), conjugator(beta));
  if (sign(beta) < 0) y = ctx_.inv(y);
  auto [i, j] = root_position(beta);
  out[3 * i + j] = y;
  return out;
}

InterpMat3 Sl3Theta::imul(const InterpMat3& x, const InterpMat3& y) const {
  InterpMat3 out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Mat3 acc = star(x[3 * i], y[j]);
      for (int k = 1; k < 3; ++k) acc = ctx_.mul(acc, star(x[3 * i + k], y[3 * k + j]));
      out[3 * i + j] = acc;
    }
  }
  return out;
}

InterpMat3 Sl3Theta::definable(const Mat3& g) const {
  InterpMat3 acc = direct(ctx_.identity());
  for (const auto& f : width_decompose(ctx_, g).factors) acc = imul(acc, restricted(f.root, f.param));
  return acc;
}

}  // namespace bilab
