#include <gtest/gtest.h>

#include <random>
#include <set>

#include "bilab/errors.hpp"
#include "bilab/ring.hpp"

using namespace bilab;

namespace {

ProductRing R(const char* d) { return parse_ring_descriptor(d); }

// Brute-force modular arithmetic on plain integers.
std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

TEST(RingArith, Examples) {
  auto r57 = R("5,7");
  EXPECT_EQ(r57.add(RingElem{3, 2}, RingElem{4, 6}), (RingElem{2, 1}));
  auto f5 = R("5");
  for (const auto& x : f5.elements()) EXPECT_EQ(f5.mul(f5.zero(), x), f5.zero());
  auto z9 = R("3^2");
  EXPECT_EQ(z9.mul(RingElem{4}, RingElem{7}), RingElem{1});
}

TEST(RingArith, LayoutMismatchThrows) {
  auto r57 = R("5,7");
  EXPECT_THROW(r57.add(RingElem{1}, RingElem{1, 2}), LayoutError);
}

TEST(RingUnits, Examples) {
  auto r57 = R("5,7");
  EXPECT_TRUE(r57.is_unit(RingElem{2, 3}));
  EXPECT_EQ(r57.inv(RingElem{2, 3}), (RingElem{3, 5}));
  auto z9 = R("3^2");
  EXPECT_FALSE(z9.is_unit(RingElem{3}));
  try {
    z9.inv(RingElem{3});
    FAIL() << "inverse of a non-unit";
  } catch (const NonUnitError& e) {
    EXPECT_EQ(e.component(), 0u);
  }
  auto f5 = R("5");
  EXPECT_EQ(f5.inv(f5.one()), f5.one());
}

TEST(RingUnits, CountsAndOrder) {
  EXPECT_EQ(R("5").units().size(), 4u);
  EXPECT_EQ(R("5,7").units().size(), 24u);
  auto z8 = R("2^3").units();
  ASSERT_EQ(z8.size(), 4u);
  EXPECT_EQ(z8[0], RingElem{1});
  EXPECT_EQ(z8[3], RingElem{7});
  for (const char* d : {"3^2,2^3,5", "7,11", "5^2", "2,3,5"}) {
    auto ring = R(d);
    std::uint64_t expected = 1;
    for (const auto& c : ring.components()) expected *= (c.prime() - 1) * ipow(c.prime(), c.exponent() - 1);
    auto us = ring.units();
    EXPECT_EQ(us.size(), expected) << d;
    EXPECT_TRUE(std::is_sorted(us.begin(), us.end())) << d;
    // brute force: u is a unit iff some v has u v = 1
    std::size_t brute = 0;
    if (ring.cardinality() <= 400) {
      for (const auto& a : ring.elements()) {
        for (const auto& b : ring.elements()) {
          if (ring.mul(a, b) == ring.one()) {
            ++brute;
            break;
          }
        }
      }
      EXPECT_EQ(brute, expected) << d;
    }
  }
}

TEST(RingDescriptor, Grammar) {
  EXPECT_EQ(R("3^2,2^3,5").num_components(), 3u);
  EXPECT_EQ(R("3^2").cardinality(), 9u);
  EXPECT_EQ(R("5,7").descriptor(), "5,7");
  EXPECT_THROW(R("9"), ConfigError);
  EXPECT_THROW(R(""), ConfigError);
  EXPECT_THROW(R("5,,7"), ConfigError);
  EXPECT_THROW(R("5^0"), ConfigError);
  EXPECT_THROW(R("x"), ConfigError);
  EXPECT_THROW(R("2^40"), ConfigError);
}

// Associativity, distributivity and commutativity on exhaustive triples
// for |R| <= 50, 1e5 random triples otherwise.
TEST(RingAxioms, Property) {
  std::mt19937_64 rng(7);
  for (const char* d : {"5", "2^3", "3^2", "5,7", "2,3,5", "7,11,13", "5^2,3"}) {
    auto ring = R(d);
    auto el = ring.elements();
    auto check = [&](const RingElem& a, const RingElem& b, const RingElem& c) {
      ASSERT_EQ(ring.add(ring.add(a, b), c), ring.add(a, ring.add(b, c)));
      ASSERT_EQ(ring.mul(ring.mul(a, b), c), ring.mul(a, ring.mul(b, c)));
      ASSERT_EQ(ring.mul(a, ring.add(b, c)), ring.add(ring.mul(a, b), ring.mul(a, c)));
      ASSERT_EQ(ring.add(a, b), ring.add(b, a));
      ASSERT_EQ(ring.mul(a, b), ring.mul(b, a));
      ASSERT_EQ(ring.add(a, ring.neg(a)), ring.zero());
      ASSERT_EQ(ring.sub(a, b), ring.add(a, ring.neg(b)));
    };
    if (el.size() <= 50) {
      for (const auto& a : el)
        for (const auto& b : el)
          for (const auto& c : el) check(a, b, c);
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, el.size() - 1);
      for (int i = 0; i < 100000; ++i) check(el[pick(rng)], el[pick(rng)], el[pick(rng)]);
    }
  }
}

TEST(RingArith, AgreesWithIntegerArithmetic) {
  auto ring = R("2^5,3^3,7,65521");
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20000; ++i) {
    RingElem a = ring.element_at(rng() % ring.cardinality());
    RingElem b = ring.element_at(rng() % ring.cardinality());
    RingElem s = ring.add(a, b), p = ring.mul(a, b);
    for (std::size_t c = 0; c < ring.num_components(); ++c) {
      std::uint64_t m = ring.component(c).modulus();
      ASSERT_EQ(s[c], (std::uint64_t{a[c]} + b[c]) % m);
      ASSERT_EQ(p[c], (std::uint64_t{a[c]} * b[c]) % m);
    }
    ASSERT_EQ(ring.index_of(a), ring.index_of(ring.element_at(ring.index_of(a))));
  }
}

TEST(BuildS, Examples) {
  auto s7 = build_S(R("7")).elements;
  EXPECT_EQ(s7, (std::vector<RingElem>{RingElem{0}, RingElem{1}}));
  auto s57 = build_S(R("5,7")).elements;
  std::set<RingElem> want{RingElem{0, 1}, RingElem{1, 1}, RingElem{4, 1}, RingElem{0, 0}};
  EXPECT_EQ(std::set<RingElem>(s57.begin(), s57.end()), want);
  EXPECT_EQ(s57.size(), 4u);
  auto s9 = build_S(R("3^2")).elements;
  EXPECT_EQ(std::set<RingElem>(s9.begin(), s9.end()), (std::set<RingElem>{RingElem{0}, RingElem{1}, RingElem{8}}));
  EXPECT_EQ(build_S(R("2^3")).size(), 8u);
  EXPECT_EQ(build_S(R("2")).size(), 2u);
}

// Oracle: lexicographically first (s, xi, eta) over the whole ring.
TEST(SquareDiff, FirstWitnessMatchesGlobalSearch) {
  for (const char* d : {"5", "7", "5,7", "3^2", "2^3", "3", "11", "3,5"}) {
    auto ring = R(d);
    SSet S = build_S(ring);
    auto units = ring.units();
    SquareDiffSolver solver(ring);
    for (const auto& a : ring.elements()) {
      std::optional<SquareDiffWitness> oracle;
      for (const auto& s : S.elements) {
        for (const auto& xi : units) {
          for (const auto& eta : units) {
            if (ring.add(ring.sub(ring.mul(xi, xi), ring.mul(eta, eta)), s) == a) {
              oracle = SquareDiffWitness{xi, eta, s};
              break;
            }
          }
          if (oracle) break;
        }
        if (oracle) break;
      }
      ASSERT_TRUE(oracle) << d << " " << to_string(a);
      auto w = solver.decompose(a);
      auto w2 = decompose_square_diff(ring, a, S);
      EXPECT_EQ(w.s, oracle->s) << d << " " << to_string(a);
      EXPECT_EQ(w.xi, oracle->xi) << d << " " << to_string(a);
      EXPECT_EQ(w.eta, oracle->eta) << d << " " << to_string(a);
      EXPECT_EQ(w2.s, w.s);
      EXPECT_EQ(w2.xi, w.xi);
      EXPECT_EQ(w2.eta, w.eta);
    }
  }
}

TEST(SquareDiff, Examples) {
  auto f7 = R("7");
  auto w = decompose_square_diff(f7, RingElem{3}, build_S(f7));
  EXPECT_EQ(w.xi, RingElem{2});
  EXPECT_EQ(w.eta, RingElem{1});
  EXPECT_EQ(w.s, RingElem{0});
  auto f5 = R("5");
  w = decompose_square_diff(f5, RingElem{0}, build_S(f5));
  EXPECT_EQ(w.xi, RingElem{1});
  EXPECT_EQ(w.eta, RingElem{1});
  EXPECT_EQ(w.s, RingElem{0});
  auto z8 = R("2^3");
  w = decompose_square_diff(z8, RingElem{5}, build_S(z8));
  EXPECT_EQ(w.xi, RingElem{1});
  EXPECT_EQ(w.eta, RingElem{1});
  EXPECT_EQ(w.s, RingElem{5});
}

TEST(SquareDiff, ExhaustiveRecombination) {
  for (const char* d : {"5,7,11,13", "3^2,5", "2^3,7", "2^4", "5^2"}) {
    auto ring = R(d);
    SquareDiffSolver solver(ring);
    for (const auto& a : ring.elements()) {
      auto w = solver.decompose(a);
      ASSERT_TRUE(ring.is_unit(w.xi) && ring.is_unit(w.eta));
      ASSERT_TRUE(solver.s_set().contains(w.s));
      for (std::size_t c = 0; c < ring.num_components(); ++c) {
        std::uint64_t m = ring.component(c).modulus();
        ASSERT_EQ((std::uint64_t{w.xi[c]} * w.xi[c] + m * m - std::uint64_t{w.eta[c]} * w.eta[c] % m + w.s[c]) % m,
                  a[c]);
      }
    }
  }
}

TEST(RtMember, Examples) {
  auto r57 = R("5,7");
  std::vector<std::int64_t> t01{0, 1};
  EXPECT_TRUE(rt_member(r57, RingElem{1, 0}, t01));
  EXPECT_FALSE(rt_member(r57, RingElem{2, 0}, t01));
  auto z9 = R("3^2");
  EXPECT_FALSE(rt_member(z9, RingElem{3}, t01));
}

TEST(RtMember, AgreesWithComponentwisePredicate) {
  for (const char* d : {"5,7", "3^2", "2^3", "5,7,11", "3,3^2"}) {
    auto ring = R(d);
    for (const std::vector<std::int64_t>& T : {std::vector<std::int64_t>{0, 1}, {1}, {0, -1}, {-1, 0, 1}}) {
      bool unit_diffs = true;
      for (const auto& c : ring.components()) {
        for (auto x : T)
          for (auto y : T)
            if (x != y && !c.is_unit(c.from_int(x - y))) unit_diffs = false;
      }
      if (!unit_diffs) continue;
      for (const auto& r : ring.elements()) {
        bool comp = true;
        for (std::size_t c = 0; c < ring.num_components(); ++c) {
          bool hit = false;
          for (auto t : T) hit = hit || ring.component(c).from_int(t) == r[c];
          comp = comp && hit;
        }
        ASSERT_EQ(rt_member(ring, r, T), comp) << d << " " << to_string(r);
      }
    }
  }
}

TEST(RtMember, ZeroDivisorEdgeCase) {
  // 6 * (6 - 3) = 18 = 0 mod 9 although 6 is not in T.
  auto z9 = R("3^2");
  std::vector<std::int64_t> T{0, 3};
  EXPECT_TRUE(rt_member(z9, RingElem{6}, T));
}
