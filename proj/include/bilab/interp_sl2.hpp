#pragma once

// The ring R interpreted in Gamma = SL2(R)/Z and Gamma interpreted back in
// the interpreted ring: definable sets H, U, V, W, Gamma_1, the star
// product, the VHU decomposition and the map theta.

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bilab/formula.hpp"
#include "bilab/ring.hpp"
#include "bilab/sl2.hpp"

namespace bilab {

struct DefinabilityReport {
  std::string name;
  std::size_t computed_size = 0;
  std::size_t oracle_size = 0;
  bool equal = false;
  std::vector<GroupElem> counterexamples;  // symmetric difference, at most 10
  double elapsed_ms = 0;
};

// Both inputs need not be sorted.
DefinabilityReport compare_sets(std::string name, std::vector<GroupElem> computed, std::vector<GroupElem> oracle);

// 2x2 matrix over the interpreted ring U.
struct MatU {
  GroupElem a, b, c, d;

  friend bool operator==(const MatU&, const MatU&) = default;
};

struct VHU {
  GroupElem v, h, u;
};

namespace formulas {

inline constexpr const char* kH = "g * $h = $h * g";
inline constexpr const char* kU = "exists x:H, y:H, s:S . g = $u ^ x * ($u ^ y) ^-1 * s";
inline constexpr const char* kV = "exists y:U . g = y ^ $w";
inline constexpr const char* kW = "exists y:U01, z:U01 . g = y * z ^ $w * y and g * g * g * g = 1";
inline constexpr const char* kGamma1 = "exists x:V, y:H, z:U . g = x * y * z";

// Multiplication relation P(y1, y2, y3): one disjunct per (s, t) in S x S,
// with parameters $us_i = u(S[i]) and $ust_i_j = u(S[i] S[j]).
std::string p_formula(std::size_t s_size);

}  // namespace formulas

class Sl2Interp {
 public:
  struct Options {
    bool corrupt_star = false;  // self-test hook: star_mul returns y1*y2 . u
  };

  explicit Sl2Interp(const GroupCtx& ctx) : Sl2Interp(ctx, Options{}) {}
  Sl2Interp(const GroupCtx& ctx, Options options);

  const GroupCtx& ctx() const { return ctx_; }
  const ProductRing& ring() const { return ctx_.ring(); }
  const SSet& s_set() const { return solver_.s_set(); }

  // u(R) in ring element order; the rest are constructive oracles.
  const std::vector<GroupElem>& u_oracle() const { return u_elems_; }
  std::vector<GroupElem> v_oracle() const;
  std::vector<GroupElem> h_oracle() const;
  std::vector<GroupElem> w_oracle() const;  // componentwise 1 or w
  std::vector<GroupElem> s_elems() const;   // u(s), s in S
  std::vector<GroupElem> u01_oracle() const;

  fo::ParamEnv params() const;

  GroupElem encode(const RingElem& r) const { return ctx_.make_u(r); }
  std::optional<RingElem> decode(const GroupElem& y) const;
  bool in_u(const GroupElem& g) const { return decode(g).has_value(); }
  bool in_v(const GroupElem& g) const { return v_index_.count(g) > 0; }
  bool in_h(const GroupElem& g) const { return h_index_.count(g) > 0; }
  bool in_w(const GroupElem& g) const { return w_index_.count(g) > 0; }

  // u(beta) * u(alpha) = u(beta alpha), evaluated through the square
  // difference witnesses. Throws DomainError outside U.
  GroupElem star_mul(const GroupElem& y1, const GroupElem& y2) const;

  bool gamma1_member(const GroupElem& g) const;
  VHU vhu_decompose(const GroupElem& g) const;   // DomainError outside Gamma_1
  GroupElem choose_w_twist(const GroupElem& g) const;

  MatU theta_direct(const GroupElem& g) const;
  MatU theta_restricted(const GroupElem& g) const;  // g in U, V, H or W
  MatU theta_definable(const GroupElem& g) const;

  MatU matu_mul(const MatU& x, const MatU& y) const;
  MatU matu_adj(const MatU& x) const;
  GroupElem matu_det(const MatU& x) const;
  Mat2 matu_decode(const MatU& x) const;  // DomainError if an entry is outside U
  // Decoded matrix equals g up to the quotient.
  bool represents(const MatU& x, const GroupElem& g) const;

  RingElem roundtrip_ring(const RingElem& r) const;
  GroupElem roundtrip_group(const GroupElem& g) const;

 private:
  std::pair<GroupElem, GroupElem> h_witness(const GroupElem& g) const;

  GroupCtx ctx_;
  Options options_;
  SquareDiffSolver solver_;
  std::vector<GroupElem> u_elems_;
  std::unordered_map<GroupElem, RingElem, GroupElemHash> u_index_;
  std::unordered_map<GroupElem, RingElem, GroupElemHash> v_index_;
  std::unordered_map<GroupElem, RingElem, GroupElemHash> h_index_;
  std::unordered_map<GroupElem, std::size_t, GroupElemHash> w_index_;
  GroupElem w_inv_;
  mutable std::mutex h_memo_mutex_;
  mutable std::unordered_map<GroupElem, std::pair<GroupElem, GroupElem>, GroupElemHash> h_memo_;
};

// The definable sets of one (ring, quotient), computed from their formulas
// over the enumerated group and cached. Safe to share between threads.
class DefinableSets {
 public:
  DefinableSets(const Sl2Interp& interp, std::size_t jobs);

  const Sl2Interp& interp() const { return interp_; }
  const GroupCarrier& carrier() const;

  const std::vector<GroupElem>& H() const;     // centralizer of h(tau) by scan
  const std::vector<GroupElem>& U() const;
  const std::vector<GroupElem>& V() const;
  const std::vector<fo::Tuple>& P() const;     // (y1, y2, y3) triples
  const std::vector<GroupElem>& U01() const;   // {y : P(y, y, y)}
  const std::vector<GroupElem>& W() const;
  const std::vector<GroupElem>& Gamma1() const;

  // Carrier by name: G, S, H, U, V, W, U01, Gamma1. ConfigError otherwise.
  const std::vector<GroupElem>& named(std::string_view name) const;
  std::size_t jobs() const { return jobs_; }

 private:
  template <class T>
  struct Lazy {
    std::once_flag once;
    T value;
  };

  const Sl2Interp& interp_;
  std::size_t jobs_;
  mutable Lazy<std::unique_ptr<GroupCarrier>> carrier_;
  mutable Lazy<std::vector<GroupElem>> s_, h_, u_, v_, u01_, w_, gamma1_;
  mutable Lazy<std::vector<fo::Tuple>> p_;
};

// Per-element checks of the definable descriptions of the VHU factors:
// V n gUH = {v~(g)}, U n HVg = {u~(g)}, H n VgU = {h~(g)}.
class TildeChecker {
 public:
  explicit TildeChecker(const Sl2Interp& interp);

  std::vector<GroupElem> v_part(const GroupElem& g) const;
  std::vector<GroupElem> u_part(const GroupElem& g) const;
  std::vector<GroupElem> h_part(const GroupElem& g) const;
  // The left-coset reading V n HUg, which does not pick v~(g) in general.
  std::vector<GroupElem> v_part_literal(const GroupElem& g) const;

 private:
  const Sl2Interp& interp_;
  std::vector<GroupElem> u_, v_, h_;
  std::unordered_map<GroupElem, int, GroupElemHash> uh_, hv_, hu_;
  std::unordered_map<GroupElem, std::vector<GroupElem>, GroupElemHash> vzu_;
};

}  // namespace bilab
