#pragma once

// SL3 over a ProductRing as the rank-2 Chevalley group of type A2: root
// subgroups, the SL2 embeddings phi_alpha, bounded elementary width and
// the map theta into matrices over U_gamma.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "bilab/ring.hpp"
#include "bilab/sl2.hpp"

namespace bilab {

enum class Root : std::uint8_t { A1, A2, A12, NegA1, NegA2, NegA12 };

inline constexpr std::array<Root, 6> kRoots = {Root::A1, Root::A2, Root::A12, Root::NegA1, Root::NegA2, Root::NegA12};

std::string_view root_name(Root r);  // a1, a2, a1+a2, -a1, -a2, -a1-a2
bool is_positive(Root r);
Root negate(Root r);
// 0-based off-diagonal position: a1 (0,1), a2 (1,2), a1+a2 (0,2); negatives transposed.
std::pair<int, int> root_position(Root r);

struct Mat3 {
  std::array<RingElem, 9> e;  // row-major

  const RingElem& operator()(int i, int j) const { return e[3 * i + j]; }
  RingElem& operator()(int i, int j) { return e[3 * i + j]; }

  friend bool operator==(const Mat3&, const Mat3&) = default;
  friend auto operator<=>(const Mat3&, const Mat3&) = default;
};

std::string to_string(const Mat3& m);  // "([..],[..],[..];...;...)"

struct Mat3Hash {
  std::size_t operator()(const Mat3& m) const noexcept;
};

inline constexpr double kSl3EnumerationLimit = 2e7;  // |R|^9
inline constexpr double kKlemmaLimit = 1e7;          // |R|^8

class Sl3Ctx {
 public:
  explicit Sl3Ctx(ProductRing ring);

  const ProductRing& ring() const { return ring_; }
  const Mat3& identity() const { return identity_; }

  Mat3 mul(const Mat3& x, const Mat3& y) const;
  Mat3 inv(const Mat3& x) const;  // adjugate, valid for det 1
  RingElem det(const Mat3& x) const;
  Mat3 conj(const Mat3& g, const Mat3& x) const;  // x^-1 g x
  Mat3 make(const Mat3& m) const;                 // DomainError unless det 1

  Mat3 x_root(Root r, const RingElem& t) const;
  // Embeds m in the rows/columns of the positive root alpha.
  Mat3 phi(Root alpha, const Mat2& m) const;

  // Scalars lambda with lambda^3 = 1.
  std::vector<RingElem> centre_scalars() const;

  // All of SL3(R), sorted. TooLargeError when |R|^9 > 2e7.
  std::vector<Mat3> enumerate() const;
  Mat3 random_element(std::mt19937_64& rng) const;

 private:
  ProductRing ring_;
  Mat3 identity_;
};

// Elements with per-component SoA copies for the batched kernels.
class Sl3Carrier {
 public:
  Sl3Carrier(const Sl3Ctx& ctx, std::vector<Mat3> elements);

  const std::vector<Mat3>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }

  std::vector<Mat3> centralizer(const Mat3& g) const;
  // Elements commuting with every g in gens.
  std::vector<Mat3> commuting_with_all(const std::vector<Mat3>& gens) const;

 private:
  void and_commute_mask(const Mat3& g, std::vector<std::uint8_t>& mask) const;

  const Sl3Ctx& ctx_;
  std::vector<Mat3> elements_;
  std::vector<std::array<std::vector<std::uint32_t>, 9>> soa_;
};

struct Sl3Report {
  std::string name;
  std::size_t computed_size = 0;
  std::size_t oracle_size = 0;
  bool equal = false;
  std::vector<Mat3> counterexamples;  // at most 10
  std::size_t auxiliary_size = 0;     // centralizer size for the centralizer identity
};

Sl3Report compare_sets3(std::string name, std::vector<Mat3> computed, std::vector<Mat3> oracle);

std::vector<Mat3> k_subgroup(const Sl3Ctx& ctx, Root alpha);
// U_-a U_a U_-a U_a U_-a U_a U_-a U_a, sorted.
std::vector<Mat3> klemma_products(const Sl3Ctx& ctx, Root alpha);
// First parameter tuple (lexicographic) whose alternating product is target.
std::optional<std::array<RingElem, 8>> klemma_witness(const Sl3Ctx& ctx, Root alpha, const Mat3& target);
Sl3Report verify_klemma(const Sl3Ctx& ctx, Root alpha);

// Z(C_G(x_alpha(1))) against U_alpha Z(G), over the enumerated group.
// auxiliary_size is |C_G(x_alpha(1))|.
Sl3Report verify_centralizer_identity(const Sl3Ctx& ctx, const Sl3Carrier& group, Root alpha);
// Elements commuting with every root element x_beta(1): the centre of SL3(R)
// when R is a product of fields or local rings.
std::vector<Mat3> centre_by_scan(const Sl3Ctx& ctx, const Sl3Carrier& group);
std::vector<Mat3> centre_oracle(const Sl3Ctx& ctx);  // scalars with lambda^3 = 1

inline constexpr std::size_t kWidthBound = 192;  // 8 n N1 with n = 3, N1 = 3 + 2 + 3

struct WidthFactor {
  Root root;
  RingElem param;
};

struct WidthDecomposition {
  std::vector<WidthFactor> factors;
  std::size_t bound = kWidthBound;
};

WidthDecomposition width_decompose(const Sl3Ctx& ctx, const Mat3& g);
Mat3 reassemble(const Sl3Ctx& ctx, const WidthDecomposition& d);

// 3x3 matrix over the interpreted ring U_gamma.
using InterpMat3 = std::array<Mat3, 9>;

class Sl3Theta {
 public:
  explicit Sl3Theta(const Sl3Ctx& ctx, Root gamma = Root::A1);

  Root gamma() const { return gamma_; }
  Mat3 encode(const RingElem& r) const { return ctx_.x_root(gamma_, r); }
  std::optional<RingElem> decode(const Mat3& x) const;

  // x_gamma(b) * x_gamma(a) = x_gamma(b a) through square-difference
  // witnesses mapped by phi_gamma.
  Mat3 star(const Mat3& y1, const Mat3& y2) const;

  InterpMat3 direct(const Mat3& g) const;
  // Elementary interpreted matrix of x_beta(t): the entry comes from
  // conjugating into U_gamma by a fixed signed permutation.
  InterpMat3 restricted(Root beta, const RingElem& t) const;
  InterpMat3 definable(const Mat3& g) const;
  InterpMat3 imul(const InterpMat3& x, const InterpMat3& y) const;

  const Mat3& conjugator(Root beta) const { return conj_[static_cast<int>(beta)]; }
  int sign(Root beta) const { return sign_[static_cast<int>(beta)]; }

 private:
  const Sl3Ctx& ctx_;
  Root gamma_;
  SquareDiffSolver solver_;
  std::array<Mat3, 6> conj_;
  std::array<int, 6> sign_{};
};

}  // namespace bilab
