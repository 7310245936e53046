#pragma once

// Finite models of R: products of residue rings Z/p^k.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bilab {

inline constexpr std::size_t kMaxComponents = 8;
inline constexpr std::uint64_t kMaxCarrier = std::uint64_t{1} << 31;

// Element of a product ring: one least-non-negative residue per component.
// The ring layout lives in ProductRing; a RingElem is a plain value.
class RingElem {
 public:
  RingElem() = default;
  explicit RingElem(std::span<const std::uint32_t> residues);
  RingElem(std::initializer_list<std::uint32_t> residues);

  std::size_t size() const { return size_; }
  std::uint32_t operator[](std::size_t i) const { return residues_[i]; }
  std::uint32_t& operator[](std::size_t i) { return residues_[i]; }
  std::span<const std::uint32_t> residues() const { return {residues_.data(), size_}; }

  friend bool operator==(const RingElem&, const RingElem&) = default;
  friend std::strong_ordering operator<=>(const RingElem& x, const RingElem& y);

  std::size_t hash() const;

 private:
  std::array<std::uint32_t, kMaxComponents> residues_{};
  std::uint8_t size_ = 0;
};

std::string to_string(const RingElem& e);  // "[r1,r2,...]"

// Z/prime^exponent.
class LocalRing {
 public:
  LocalRing(std::uint32_t prime, std::uint32_t exponent);

  std::uint32_t prime() const { return prime_; }
  std::uint32_t exponent() const { return exponent_; }
  std::uint32_t modulus() const { return modulus_; }
  bool is_field() const { return exponent_ == 1; }

  std::uint32_t reduce(std::uint64_t x) const {
    if (fast_) {
      // Lemire's fastmod, exact for x < 2^32.
      std::uint64_t low = magic_ * static_cast<std::uint32_t>(x);
      return static_cast<std::uint32_t>((static_cast<unsigned __int128>(low) * modulus_) >> 64);
    }
    return static_cast<std::uint32_t>(x % modulus_);
  }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t s = a + b;
    return s >= modulus_ ? s - modulus_ : s;
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const {
    return a >= b ? a - b : a + modulus_ - b;
  }
  std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : modulus_ - a; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return fast_ ? reduce(std::uint64_t{a} * b)
                 : static_cast<std::uint32_t>(std::uint64_t{a} * b % modulus_);
  }
  bool is_unit(std::uint32_t a) const { return a % prime_ != 0; }
  std::optional<std::uint32_t> inv(std::uint32_t a) const;
  std::uint32_t from_int(std::int64_t v) const;

  std::string descriptor() const;  // "p" or "p^k"

  friend bool operator==(const LocalRing& x, const LocalRing& y) {
    return x.prime_ == y.prime_ && x.exponent_ == y.exponent_;
  }

 private:
  std::uint32_t prime_;
  std::uint32_t exponent_;
  std::uint32_t modulus_;
  std::uint64_t magic_ = 0;
  bool fast_ = false;
};

bool is_prime(std::uint64_t n);

class ProductRing {
 public:
  explicit ProductRing(std::vector<LocalRing> components);

  std::size_t num_components() const { return components_.size(); }
  const LocalRing& component(std::size_t i) const { return components_[i]; }
  const std::vector<LocalRing>& components() const { return components_; }
  std::uint64_t cardinality() const { return cardinality_; }
  std::string descriptor() const;

  RingElem zero() const;
  RingElem one() const;
  RingElem from_int(std::int64_t v) const;
  RingElem from_residues(std::span<const std::uint32_t> residues) const;  // reduces

  RingElem add(const RingElem& a, const RingElem& b) const;
  RingElem sub(const RingElem& a, const RingElem& b) const;
  RingElem neg(const RingElem& a) const;
  RingElem mul(const RingElem& a, const RingElem& b) const;

  bool is_unit(const RingElem& a) const;
  RingElem inv(const RingElem& a) const;  // throws NonUnitError

  // i-th element in lexicographic order (first component most significant).
  RingElem element_at(std::uint64_t index) const;
  std::uint64_t index_of(const RingElem& a) const;
  std::vector<RingElem> elements() const;
  std::vector<RingElem> units() const;

  void check(const RingElem& a) const {  // throws LayoutError
    if (a.size() != components_.size()) layout_mismatch(a);
  }

  friend bool operator==(const ProductRing& x, const ProductRing& y) {
    return x.components_ == y.components_;
  }

 private:
  [[noreturn]] void layout_mismatch(const RingElem& a) const;

  std::vector<LocalRing> components_;
  std::uint64_t cardinality_ = 1;
};

// "p" or "p^k" tokens separated by commas, e.g. "3^2,2^3,5".
ProductRing parse_ring_descriptor(std::string_view text);

struct SSet {
  std::vector<RingElem> elements;  // sorted, distinct

  bool contains(const RingElem& e) const;
  std::size_t size() const { return elements.size(); }
};

struct SquareDiffWitness {
  RingElem xi;
  RingElem eta;
  RingElem s;
};

// Per-component local sets combined across components, with the global 0
// and 1 adjoined.
SSet build_S(const ProductRing& ring);

// Writes a = xi^2 - eta^2 + s with xi, eta units and s in S. The table of
// first-found local witnesses is built once per ring.
class SquareDiffSolver {
 public:
  explicit SquareDiffSolver(const ProductRing& ring);

  const ProductRing& ring() const { return ring_; }
  const SSet& s_set() const { return s_; }

  SquareDiffWitness decompose(const RingElem& a) const;

 private:
  struct LocalPair {
    std::uint32_t xi;
    std::uint32_t eta;
  };
  std::optional<LocalPair> local_solve(std::size_t component, std::uint32_t target) const;

  ProductRing ring_;
  SSet s_;
  // tables_[c][d]: lexicographically first unit pair with xi^2 - eta^2 = d.
  std::vector<std::vector<std::optional<LocalPair>>> tables_;
};

SquareDiffWitness decompose_square_diff(const ProductRing& ring, const RingElem& a,
                                        const SSet& s_set);

// r in R_T  <=>  prod_{t in T} (r - t) == 0.
bool rt_member(const ProductRing& ring, const RingElem& r, std::span<const std::int64_t> t_set);

}  // namespace bilab

template <>
struct std::hash<bilab::RingElem> {
  std::size_t operator()(const bilab::RingElem& e) const noexcept { return e.hash(); }
};
