#pragma once

// SL2 over a ProductRing and its central quotients. Group elements are
// canonical coset representatives so equality is plain comparison.

#include <compare>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bilab/ring.hpp"

namespace bilab {

// (a, b; c, d). Member order gives the entry-major, component-minor total
// order used for canonical representatives.
struct Mat2 {
  RingElem a, b, c, d;

  friend bool operator==(const Mat2&, const Mat2&) = default;
  friend auto operator<=>(const Mat2&, const Mat2&) = default;
};

std::string to_string(const Mat2& m);  // "([..],[..];[..],[..])"

Mat2 mat_identity(const ProductRing& ring);
Mat2 mat_mul(const ProductRing& ring, const Mat2& x, const Mat2& y);
Mat2 mat_scale(const ProductRing& ring, const RingElem& lambda, const Mat2& m);
RingElem mat_det(const ProductRing& ring, const Mat2& m);

enum class QuotientKind { Trivial, PlusMinusOne, FullCentre };

// CLI names: sl2, mod-pm1, psl2.
std::string_view quotient_name(QuotientKind q);
QuotientKind parse_quotient(std::string_view name);

// Scalars lambda with lambda^2 = 1 whose matrices lambda*I make up the
// central subgroup Z for q; the global 1 comes first.
std::vector<RingElem> central_scalars(const ProductRing& ring, QuotientKind q);

// B = A*Z for some Z in the central subgroup designated by q.
bool quotient_equiv(const ProductRing& ring, const Mat2& a, const Mat2& b, QuotientKind q);

class GroupElem {
 public:
  GroupElem() = default;

  const Mat2& rep() const { return rep_; }
  QuotientKind quotient() const { return quotient_; }

  friend bool operator==(const GroupElem&, const GroupElem&) = default;
  friend auto operator<=>(const GroupElem& x, const GroupElem& y) { return x.rep_ <=> y.rep_; }

  std::size_t hash() const;

 private:
  friend class GroupCtx;
  GroupElem(Mat2 rep, QuotientKind q) : rep_(std::move(rep)), quotient_(q) {}

  Mat2 rep_;
  QuotientKind quotient_ = QuotientKind::Trivial;
};

std::string to_string(const GroupElem& g);

struct GroupElemHash {
  std::size_t operator()(const GroupElem& g) const noexcept { return g.hash(); }
};

// Gamma = SL2(R)/Z together with the fixed parameters tau, u = u(1),
// v = v(1), h = h(tau) and w = uvu.
class GroupCtx {
 public:
  GroupCtx(ProductRing ring, QuotientKind quotient);

  const ProductRing& ring() const { return ring_; }
  QuotientKind quotient() const { return quotient_; }
  const std::vector<RingElem>& central() const { return central_; }

  const RingElem& tau() const { return tau_; }
  const GroupElem& u() const { return u_; }
  const GroupElem& v() const { return v_; }
  const GroupElem& h_tau() const { return h_tau_; }
  const GroupElem& w() const { return w_; }
  const GroupElem& identity() const { return identity_; }

  // Throws DomainError unless det(m) = 1.
  GroupElem make(const Mat2& m) const;
  Mat2 canonical(const Mat2& m) const;

  GroupElem make_u(const RingElem& lambda) const;  // (1, l; 0, 1)
  GroupElem make_v(const RingElem& lambda) const;  // (1, 0; -l, 1)
  GroupElem make_h(const RingElem& lambda) const;  // diag(l^-1, l), NonUnitError

  GroupElem mul(const GroupElem& x, const GroupElem& y) const;
  GroupElem inv(const GroupElem& x) const;
  GroupElem conj(const GroupElem& g, const GroupElem& x) const;  // x^-1 g x
  GroupElem pow(const GroupElem& g, std::int64_t n) const;
  bool commutes(const GroupElem& x, const GroupElem& y) const;

  // All elements in canonical order. Throws TooLargeError when |R|^4 > 10^8.
  std::vector<GroupElem> enumerate() const;

  // Uniform sample, without enumerating the group.
  GroupElem random_element(std::mt19937_64& rng) const;

 private:
  GroupElem wrap(const Mat2& m) const { return GroupElem(canonical(m), quotient_); }

  ProductRing ring_;
  QuotientKind quotient_;
  std::vector<RingElem> central_;
  RingElem tau_;
  GroupElem identity_, u_, v_, h_tau_, w_;
};

inline constexpr std::uint64_t kEnumerationLimit = 100'000'000;

// The enumerated group with per-component structure-of-arrays copies for
// the batched kernels.
class GroupCarrier {
 public:
  explicit GroupCarrier(const GroupCtx& ctx);

  const GroupCtx& ctx() const { return ctx_; }
  const std::vector<GroupElem>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  std::optional<std::size_t> index_of(const GroupElem& g) const;

  // Brute-force scans over the whole carrier.
  std::vector<GroupElem> centralizer(const GroupElem& g) const;
  std::vector<GroupElem> centre() const;

 private:
  std::vector<std::uint8_t> centralizer_mask(const GroupElem& g) const;

  GroupCtx ctx_;
  std::vector<GroupElem> elements_;
  // soa_[component][entry][i]
  std::vector<std::array<std::vector<std::uint32_t>, 4>> soa_;
  std::unordered_map<GroupElem, std::size_t, GroupElemHash> index_;
};

}  // namespace bilab

template <>
struct std::hash<bilab::GroupElem> {
  std::size_t operator()(const bilab::GroupElem& g) const noexcept { return g.hash(); }
};
