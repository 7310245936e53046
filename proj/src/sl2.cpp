#include "bilab/sl2.hpp"

#include <algorithm>

#include "bilab/errors.hpp"
#include "bilab/kernels.hpp"

namespace bilab {

std::string to_string(const Mat2& m) {
  return "(" + to_string(m.a) + "," + to_string(m.b) + ";" + to_string(m.c) + "," + to_string(m.d) + ")";
}

std::string to_string(const GroupElem& g) { return to_string(g.rep()); }

Mat2 mat_identity(const ProductRing& ring) { return {ring.one(), ring.zero(), ring.zero(), ring.one()}; }

Mat2 mat_mul(const ProductRing& ring, const Mat2& x, const Mat2& y) {
  Mat2 r = x;
  for (std::size_t i = 0; i < ring.num_components(); ++i) {
    const LocalRing& L = ring.component(i);
    r.a[i] = L.add(L.mul(x.a[i], y.a[i]), L.mul(x.b[i], y.c[i]));
    r.b[i] = L.add(L.mul(x.a[i], y.b[i]), L.mul(x.b[i], y.d[i]));
    r.c[i] = L.add(L.mul(x.c[i], y.a[i]), L.mul(x.d[i], y.c[i]));
    r.d[i] = L.add(L.mul(x.c[i], y.b[i]), L.mul(x.d[i], y.d[i]));
  }
  return r;
}

Mat2 mat_scale(const ProductRing& ring, const RingElem& lambda, const Mat2& m) {
  return {ring.mul(lambda, m.a), ring.mul(lambda, m.b), ring.mul(lambda, m.c), ring.mul(lambda, m.d)};
}

RingElem mat_det(const ProductRing& ring, const Mat2& m) {
  return ring.sub(ring.mul(m.a, m.d), ring.mul(m.b, m.c));
}

std::string_view quotient_name(QuotientKind q) {
  switch (q) {
    case QuotientKind::Trivial:
      return "sl2";
    case QuotientKind::PlusMinusOne:
      return "mod-pm1";
    case QuotientKind::FullCentre:
      return "psl2";
  }
  return "?";
}

QuotientKind parse_quotient(std::string_view name) {
  if (name == "sl2") return QuotientKind::Trivial;
  if (name == "mod-pm1") return QuotientKind::PlusMinusOne;
  if (name == "psl2") return QuotientKind::FullCentre;
  throw ConfigError("unknown quotient '" + std::string(name) + "' (expected sl2, mod-pm1 or psl2)");
}

std::vector<RingElem> central_scalars(const ProductRing& ring, QuotientKind q) {
  std::vector<RingElem> out{ring.one()};
  if (q == QuotientKind::PlusMinusOne) {
    RingElem m1 = ring.neg(ring.one());
    if (m1 != ring.one()) out.push_back(m1);
  } else if (q == QuotientKind::FullCentre) {
    std::vector<std::vector<std::uint32_t>> roots;
    for (const auto& c : ring.components()) {
      std::vector<std::uint32_t> r;
      for (std::uint32_t x = 1; x < c.modulus(); ++x) {
        if (c.mul(x, x) == 1 % c.modulus()) r.push_back(x);
      }
      if (c.modulus() == 1) r.push_back(0);
      roots.push_back(std::move(r));
    }
    std::vector<std::size_t> idx(roots.size(), 0);
    while (true) {
      RingElem e = ring.zero();
      for (std::size_t i = 0; i < roots.size(); ++i) e[i] = roots[i][idx[i]];
      if (e != ring.one()) out.push_back(e);
      std::size_t i = roots.size();
      while (i > 0 && ++idx[i - 1] == roots[i - 1].size()) idx[--i] = 0;
      if (i == 0) break;
    }
  }
  return out;
}

bool quotient_equiv(const ProductRing& ring, const Mat2& a, const Mat2& b, QuotientKind q) {
  for (const RingElem& lambda : central_scalars(ring, q)) {
    if (mat_scale(ring, lambda, a) == b) return true;
  }
  return false;
}

std::size_t GroupElem::hash() const {
  std::size_t h = rep_.a.hash();
  for (const RingElem* e : {&rep_.b, &rep_.c, &rep_.d}) h = h * 0x9e3779b97f4a7c15ull ^ e->hash();
  return h;
}

GroupCtx::GroupCtx(ProductRing ring, QuotientKind quotient)
    : ring_(std::move(ring)), quotient_(quotient), central_(central_scalars(ring_, quotient)) {
  tau_ = ring_.zero();
  for (std::size_t i = 0; i < ring_.num_components(); ++i) {
    tau_[i] = ring_.component(i).from_int(ring_.component(i).prime() == 2 ? 3 : 2);
  }
  identity_ = wrap(mat_identity(ring_));
  u_ = make_u(ring_.one());
  v_ = make_v(ring_.one());
  h_tau_ = make_h(tau_);
  w_ = mul(mul(u_, v_), u_);
}

Mat2 GroupCtx::canonical(const Mat2& m) const {
  if (central_.size() == 1) return m;
  Mat2 best = m;
  for (std::size_t k = 1; k < central_.size(); ++k) {
    Mat2 cand = mat_scale(ring_, central_[k], m);
    if (cand < best) best = std::move(cand);
  }
  return best;
}

GroupElem GroupCtx::make(const Mat2& m) const {
  for (const RingElem* e : {&m.a, &m.b, &m.c, &m.d}) ring_.check(*e);
  if (mat_det(ring_, m) != ring_.one()) {
    throw DomainError("matrix " + to_string(m) + " does not have determinant 1");
  }
  return wrap(m);
}

GroupElem GroupCtx::make_u(const RingElem& lambda) const {
  ring_.check(lambda);
  return wrap({ring_.one(), lambda, ring_.zero(), ring_.one()});
}

GroupElem GroupCtx::make_v(const RingElem& lambda) const {
  ring_.check(lambda);
  return wrap({ring_.one(), ring_.zero(), ring_.neg(lambda), ring_.one()});
}

GroupElem GroupCtx::make_h(const RingElem& lambda) const {
  RingElem li = ring_.inv(lambda);
  return wrap({li, ring_.zero(), ring_.zero(), lambda});
}

GroupElem GroupCtx::mul(const GroupElem& x, const GroupElem& y) const {
  return wrap(mat_mul(ring_, x.rep(), y.rep()));
}

GroupElem GroupCtx::inv(const GroupElem& x) const {
  const Mat2& m = x.rep();
  return wrap({m.d, ring_.neg(m.b), ring_.neg(m.c), m.a});
}

GroupElem GroupCtx::conj(const GroupElem& g, const GroupElem& x) const {
  const Mat2& m = x.rep();
  Mat2 adj{m.d, ring_.neg(m.b), ring_.neg(m.c), m.a};
  return wrap(mat_mul(ring_, mat_mul(ring_, adj, g.rep()), m));
}

GroupElem GroupCtx::pow(const GroupElem& g, std::int64_t n) const {
  GroupElem base = n < 0 ? inv(g) : g;
  std::uint64_t e = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
  GroupElem acc = identity_;
  while (e) {
    if (e & 1) acc = mul(acc, base);
    base = mul(base, base);
    e >>= 1;
  }
  return acc;
}

bool GroupCtx::commutes(const GroupElem& x, const GroupElem& y) const { return mul(x, y) == mul(y, x); }

namespace {

// All (a, b, c, d) over Z/m with ad - bc = 1, by raw 4-tuple scan in blocks
// of m^2 candidates per (a, b) prefix.
std::vector<std::array<std::uint32_t, 4>> local_sl2(const LocalRing& L) {
  const std::uint32_t m = L.modulus();
  const std::size_t block = std::size_t{m} * m;
  std::vector<std::uint32_t> pa(block), pb(block), pc(block), pd(block);
  for (std::uint32_t c = 0; c < m; ++c) {
    for (std::uint32_t d = 0; d < m; ++d) {
      pc[std::size_t{c} * m + d] = c;
      pd[std::size_t{c} * m + d] = d;
    }
  }
  std::vector<std::uint8_t> mask(block);
  std::vector<std::array<std::uint32_t, 4>> out;
  for (std::uint32_t a = 0; a < m; ++a) {
    std::fill(pa.begin(), pa.end(), a);
    for (std::uint32_t b = 0; b < m; ++b) {
      std::fill(pb.begin(), pb.end(), b);
      kernels::det2_is_one({pa.data(), pb.data(), pc.data(), pd.data()}, block, m, mask.data());
      for (std::size_t i = 0; i < block; ++i) {
        if (mask[i]) out.push_back({a, b, pc[i], pd[i]});
      }
    }
  }
  return out;
}

}  // namespace

std::vector<GroupElem> GroupCtx::enumerate() const {
  const double n = static_cast<double>(ring_.cardinality());
  if (n * n * n * n > static_cast<double>(kEnumerationLimit)) {
    throw TooLargeError("SL2 enumeration over " + ring_.descriptor() + " exceeds the |R|^4 <= 10^8 guard; " +
                        "use a smaller ring (Bruhat-cell enumeration is not implemented)");
  }
  std::vector<std::vector<std::array<std::uint32_t, 4>>> local;
  std::size_t total = 1;
  for (const auto& c : ring_.components()) {
    local.push_back(local_sl2(c));
    total *= local.back().size();
  }
  std::vector<GroupElem> out;
  out.reserve(total);
  std::vector<std::size_t> idx(local.size(), 0);
  Mat2 m{ring_.zero(), ring_.zero(), ring_.zero(), ring_.zero()};
  while (true) {
    for (std::size_t i = 0; i < local.size(); ++i) {
      const auto& t = local[i][idx[i]];
      m.a[i] = t[0];
      m.b[i] = t[1];
      m.c[i] = t[2];
      m.d[i] = t[3];
    }
    out.push_back(wrap(m));
    std::size_t i = local.size();
    while (i > 0 && ++idx[i - 1] == local[i - 1].size()) idx[--i] = 0;
    if (i == 0) break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

GroupElem GroupCtx::random_element(std::mt19937_64& rng) const {
  Mat2 m{ring_.zero(), ring_.zero(), ring_.zero(), ring_.zero()};
  for (std::size_t i = 0; i < ring_.num_components(); ++i) {
    const LocalRing& L = ring_.component(i);
    std::uniform_int_distribution<std::uint32_t> dist(0, L.modulus() - 1);
    while (true) {
      std::uint32_t a = dist(rng), b = dist(rng), c = dist(rng), d = dist(rng);
      if (L.sub(L.mul(a, d), L.mul(b, c)) == 1 % L.modulus()) {
        m.a[i] = a;
        m.b[i] = b;
        m.c[i] = c;
        m.d[i] = d;
        break;
      }
    }
  }
  return wrap(m);
}

GroupCarrier::GroupCarrier(const GroupCtx& ctx) : ctx_(ctx), elements_(ctx.enumerate()) {
  const std::size_t n = elements_.size();
  const std::size_t comps = ctx_.ring().num_components();
  soa_.resize(comps);
  for (auto& c : soa_) {
    for (auto& e : c) e.resize(n);
  }
  index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Mat2& m = elements_[i].rep();
    for (std::size_t c = 0; c < comps; ++c) {
      soa_[c][0][i] = m.a[c];
      soa_[c][1][i] = m.b[c];
      soa_[c][2][i] = m.c[c];
      soa_[c][3][i] = m.d[c];
    }
    index_.emplace(elements_[i], i);
  }
}

std::optional<std::size_t> GroupCarrier::index_of(const GroupElem& g) const {
  auto it = index_.find(g);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::uint8_t> GroupCarrier::centralizer_mask(const GroupElem& g) const {
  // g' is in the centralizer of g in Gamma iff g' g = z g g' for some z in Z.
  const std::size_t n = elements_.size();
  const ProductRing& ring = ctx_.ring();
  const Mat2& h = g.rep();
  std::vector<std::uint8_t> result(n, 0), acc(n), part(n);
  for (const RingElem& lambda : ctx_.central()) {
    std::fill(acc.begin(), acc.end(), 1);
    for (std::size_t c = 0; c < ring.num_components(); ++c) {
      const LocalRing& L = ring.component(c);
      kernels::Fixed2 right{h.a[c], h.b[c], h.c[c], h.d[c]};
      kernels::Fixed2 left{L.mul(lambda[c], h.a[c]), L.mul(lambda[c], h.b[c]), L.mul(lambda[c], h.c[c]),
                           L.mul(lambda[c], h.d[c])};
      const auto& s = soa_[c];
      kernels::commute2({s[0].data(), s[1].data(), s[2].data(), s[3].data()}, n, left, right, L.modulus(),
                        part.data());
      for (std::size_t i = 0; i < n; ++i) acc[i] &= part[i];
    }
    for (std::size_t i = 0; i < n; ++i) result[i] |= acc[i];
  }
  return result;
}

std::vector<GroupElem> GroupCarrier::centralizer(const GroupElem& g) const {
  auto mask = centralizer_mask(g);
  std::vector<GroupElem> out;
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (mask[i]) out.push_back(elements_[i]);
  }
  return out;
}

std::vector<GroupElem> GroupCarrier::centre() const {
  // Every central element centralizes u; confirm each such candidate
  // against the whole carrier.
  std::vector<GroupElem> out;
  for (const GroupElem& z : centralizer(ctx_.u())) {
    auto mask = centralizer_mask(z);
    if (std::all_of(mask.begin(), mask.end(), [](std::uint8_t b) { return b != 0; })) out.push_back(z);
  }
  return out;
}

}  // namespace bilab
