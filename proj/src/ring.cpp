#include "bilab/ring.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "bilab/errors.hpp"

namespace bilab {

RingElem::RingElem(std::span<const std::uint32_t> residues) {
  if (residues.size() > kMaxComponents) {
    throw LayoutError("ring element has " + std::to_string(residues.size()) +
                      " components; at most " + std::to_string(kMaxComponents) + " supported");
  }
  std::copy(residues.begin(), residues.end(), residues_.begin());
  size_ = static_cast<std::uint8_t>(residues.size());
}

RingElem::RingElem(std::initializer_list<std::uint32_t> residues)
    : RingElem(std::span<const std::uint32_t>(residues.begin(), residues.size())) {}

std::strong_ordering operator<=>(const RingElem& x, const RingElem& y) {
  if (auto c = x.size_ <=> y.size_; c != 0) return c;
  for (std::size_t i = 0; i < x.size_; ++i) {
    if (auto c = x.residues_[i] <=> y.residues_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::size_t RingElem::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ull ^ size_;
  for (std::size_t i = 0; i < size_; ++i) {
    h = (h ^ residues_[i]) * 0x100000001b3ull;
  }
  return static_cast<std::size_t>(h ^ (h >> 29));
}

std::string to_string(const RingElem& e) {
  std::string out = "[";
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(e[i]);
  }
  out += ']';
  return out;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

LocalRing::LocalRing(std::uint32_t prime, std::uint32_t exponent)
    : prime_(prime), exponent_(exponent) {
  if (!is_prime(prime)) throw ConfigError(std::to_string(prime) + " is not prime");
  if (exponent < 1) throw ConfigError("exponent must be at least 1");
  std::uint64_t m = 1;
  for (std::uint32_t i = 0; i < exponent; ++i) {
    m *= prime;
    if (m > kMaxCarrier) {
      throw ConfigError("carrier " + descriptor() + " exceeds 2^31");
    }
  }
  modulus_ = static_cast<std::uint32_t>(m);
  if (modulus_ < (1u << 16)) {
    fast_ = true;
    magic_ = ~std::uint64_t{0} / modulus_ + 1;
  }
}

std::optional<std::uint32_t> LocalRing::inv(std::uint32_t a) const {
  // Extended Euclid on (a, m).
  std::int64_t r0 = modulus_, r1 = a % modulus_;
  std::int64_t t0 = 0, t1 = 1;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::tie(r0, r1) = std::pair{r1, r0 - q * r1};
    std::tie(t0, t1) = std::pair{t1, t0 - q * t1};
  }
  if (r0 != 1) return std::nullopt;
  return from_int(t0);
}

std::uint32_t LocalRing::from_int(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(modulus_);
  if (r < 0) r += modulus_;
  return static_cast<std::uint32_t>(r);
}

std::string LocalRing::descriptor() const {
  std::string s = std::to_string(prime_);
  if (exponent_ != 1) s += "^" + std::to_string(exponent_);
  return s;
}

ProductRing::ProductRing(std::vector<LocalRing> components) : components_(std::move(components)) {
  if (components_.empty()) throw ConfigError("ring needs at least one component");
  if (components_.size() > kMaxComponents) {
    throw ConfigError("at most " + std::to_string(kMaxComponents) + " components supported");
  }
  for (const auto& c : components_) {
    cardinality_ *= c.modulus();
    if (cardinality_ > (std::uint64_t{1} << 62)) throw ConfigError("ring too large");
  }
}

std::string ProductRing::descriptor() const {
  std::string s;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i) s += ',';
    s += components_[i].descriptor();
  }
  return s;
}

void ProductRing::layout_mismatch(const RingElem& a) const {
  throw LayoutError("element " + to_string(a) + " does not match ring " + descriptor());
}

RingElem ProductRing::zero() const {
  std::array<std::uint32_t, kMaxComponents> r{};
  return RingElem(std::span<const std::uint32_t>(r.data(), components_.size()));
}

RingElem ProductRing::one() const { return from_int(1); }

RingElem ProductRing::from_int(std::int64_t v) const {
  RingElem e = zero();
  for (std::size_t i = 0; i < components_.size(); ++i) e[i] = components_[i].from_int(v);
  return e;
}

RingElem ProductRing::from_residues(std::span<const std::uint32_t> residues) const {
  RingElem e(residues);
  check(e);
  for (std::size_t i = 0; i < components_.size(); ++i) e[i] %= components_[i].modulus();
  return e;
}

RingElem ProductRing::add(const RingElem& a, const RingElem& b) const {
  check(a);
  check(b);
  RingElem r = a;
  for (std::size_t i = 0; i < components_.size(); ++i) r[i] = components_[i].add(a[i], b[i]);
  return r;
}

RingElem ProductRing::sub(const RingElem& a, const RingElem& b) const {
  check(a);
  check(b);
  RingElem r = a;
  for (std::size_t i = 0; i < components_.size(); ++i) r[i] = components_[i].sub(a[i], b[i]);
  return r;
}

RingElem ProductRing::neg(const RingElem& a) const {
  check(a);
  RingElem r = a;
  for (std::size_t i = 0; i < components_.size(); ++i) r[i] = components_[i].neg(a[i]);
  return r;
}

RingElem ProductRing::mul(const RingElem& a, const RingElem& b) const {
  check(a);
  check(b);
  RingElem r = a;
  for (std::size_t i = 0; i < components_.size(); ++i) r[i] = components_[i].mul(a[i], b[i]);
  return r;
}

bool ProductRing::is_unit(const RingElem& a) const {
  check(a);
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (!components_[i].is_unit(a[i])) return false;
  }
  return true;
}

RingElem ProductRing::inv(const RingElem& a) const {
  check(a);
  RingElem r = a;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    auto v = components_[i].inv(a[i]);
    if (!v) {
      throw NonUnitError(i, to_string(a) + " is not a unit (component " + std::to_string(i) + ")");
    }
    r[i] = *v;
  }
  return r;
}

RingElem ProductRing::element_at(std::uint64_t index) const {
  RingElem e = zero();
  for (std::size_t i = components_.size(); i-- > 0;) {
    e[i] = static_cast<std::uint32_t>(index % components_[i].modulus());
    index /= components_[i].modulus();
  }
  return e;
}

std::uint64_t ProductRing::index_of(const RingElem& a) const {
  check(a);
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    index = index * components_[i].modulus() + a[i];
  }
  return index;
}

std::vector<RingElem> ProductRing::elements() const {
  std::vector<RingElem> out;
  out.reserve(cardinality_);
  for (std::uint64_t i = 0; i < cardinality_; ++i) out.push_back(element_at(i));
  return out;
}

std::vector<RingElem> ProductRing::units() const {
  std::vector<RingElem> out;
  for (std::uint64_t i = 0; i < cardinality_; ++i) {
    RingElem e = element_at(i);
    if (is_unit(e)) out.push_back(e);
  }
  return out;
}

ProductRing parse_ring_descriptor(std::string_view text) {
  std::vector<LocalRing> comps;
  auto parse_uint = [&](std::string_view tok) -> std::uint32_t {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || tok.empty() || v > kMaxCarrier) {
      throw ConfigError("malformed ring descriptor token '" + std::string(tok) + "'");
    }
    return static_cast<std::uint32_t>(v);
  };
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = text.find(',', pos);
    std::string_view tok = trim(text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos));
    if (tok.empty()) throw ConfigError("empty component in ring descriptor '" + std::string(text) + "'");
    std::size_t caret = tok.find('^');
    if (caret == std::string_view::npos) {
      comps.emplace_back(parse_uint(tok), 1);
    } else {
      comps.emplace_back(parse_uint(trim(tok.substr(0, caret))), parse_uint(trim(tok.substr(caret + 1))));
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return ProductRing(std::move(comps));
}

bool SSet::contains(const RingElem& e) const {
  return std::binary_search(elements.begin(), elements.end(), e);
}

SSet build_S(const ProductRing& ring) {
  std::vector<std::vector<std::uint32_t>> local;
  for (const auto& c : ring.components()) {
    std::vector<std::uint32_t> set;
    if (c.prime() == 3 || c.prime() == 5) {
      set = {0, 1, c.modulus() - 1};
    } else if (c.prime() == 2) {
      // Coset representatives of 4p = 8Z_2.
      for (std::uint32_t r = 0; r < std::min<std::uint32_t>(8, c.modulus()); ++r) set.push_back(r);
    } else {
      set = {1};
    }
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    local.push_back(std::move(set));
  }

  SSet s;
  std::vector<std::size_t> idx(local.size(), 0);
  while (true) {
    RingElem e = ring.zero();
    for (std::size_t i = 0; i < local.size(); ++i) e[i] = local[i][idx[i]];
    s.elements.push_back(e);
    std::size_t i = local.size();
    while (i > 0 && ++idx[i - 1] == local[i - 1].size()) idx[--i] = 0;
    if (i == 0) break;
  }
  s.elements.push_back(ring.zero());
  s.elements.push_back(ring.one());
  std::sort(s.elements.begin(), s.elements.end());
  s.elements.erase(std::unique(s.elements.begin(), s.elements.end()), s.elements.end());
  return s;
}

namespace {

constexpr std::uint32_t kTableLimit = 1u << 12;

struct UnitPair {
  std::uint32_t xi;
  std::uint32_t eta;
};

std::optional<UnitPair> search_local(const LocalRing& c, std::uint32_t target) {
  for (std::uint32_t xi = 1; xi < c.modulus(); ++xi) {
    if (!c.is_unit(xi)) continue;
    std::uint32_t xi2 = c.mul(xi, xi);
    for (std::uint32_t eta = 1; eta < c.modulus(); ++eta) {
      if (!c.is_unit(eta)) continue;
      if (c.sub(xi2, c.mul(eta, eta)) == target) return UnitPair{xi, eta};
    }
  }
  return std::nullopt;
}

}  // namespace

SquareDiffSolver::SquareDiffSolver(const ProductRing& ring) : ring_(ring), s_(build_S(ring)) {
  for (const auto& c : ring_.components()) {
    std::vector<std::optional<LocalPair>> table;
    if (c.modulus() <= kTableLimit) {
      table.assign(c.modulus(), std::nullopt);
      std::size_t filled = 0;
      for (std::uint32_t xi = 1; xi < c.modulus() && filled < c.modulus(); ++xi) {
        if (!c.is_unit(xi)) continue;
        std::uint32_t xi2 = c.mul(xi, xi);
        for (std::uint32_t eta = 1; eta < c.modulus(); ++eta) {
          if (!c.is_unit(eta)) continue;
          auto& slot = table[c.sub(xi2, c.mul(eta, eta))];
          if (!slot) {
            slot = LocalPair{xi, eta};
            ++filled;
          }
        }
      }
    }
    tables_.push_back(std::move(table));
  }
}

std::optional<SquareDiffSolver::LocalPair> SquareDiffSolver::local_solve(std::size_t component,
                                                                         std::uint32_t target) const {
  if (!tables_[component].empty()) return tables_[component][target];
  auto p = search_local(ring_.component(component), target);
  if (!p) return std::nullopt;
  return LocalPair{p->xi, p->eta};
}

SquareDiffWitness SquareDiffSolver::decompose(const RingElem& a) const {
  ring_.check(a);
  for (const RingElem& s : s_.elements) {
    SquareDiffWitness w{ring_.zero(), ring_.zero(), s};
    bool ok = true;
    for (std::size_t i = 0; i < ring_.num_components() && ok; ++i) {
      auto p = local_solve(i, ring_.component(i).sub(a[i], s[i]));
      if (!p) {
        ok = false;
      } else {
        w.xi[i] = p->xi;
        w.eta[i] = p->eta;
      }
    }
    if (ok) return w;
  }
  throw DecompositionError("no square-difference witness for " + to_string(a) + " over " +
                           ring_.descriptor());
}

SquareDiffWitness decompose_square_diff(const ProductRing& ring, const RingElem& a,
                                        const SSet& s_set) {
  ring.check(a);
  for (const RingElem& s : s_set.elements) {
    SquareDiffWitness w{ring.zero(), ring.zero(), s};
    bool ok = true;
    for (std::size_t i = 0; i < ring.num_components() && ok; ++i) {
      auto p = search_local(ring.component(i), ring.component(i).sub(a[i], s[i]));
      if (!p) {
        ok = false;
      } else {
        w.xi[i] = p->xi;
        w.eta[i] = p->eta;
      }
    }
    if (ok) return w;
  }
  throw DecompositionError("no square-difference witness for " + to_string(a) + " over " +
                           ring.descriptor());
}

bool rt_member(const ProductRing& ring, const RingElem& r, std::span<const std::int64_t> t_set) {
  RingElem f = ring.one();
  for (std::int64_t t : t_set) f = ring.mul(f, ring.sub(r, ring.from_int(t)));
  return f == ring.zero();
}

}  // namespace bilab
