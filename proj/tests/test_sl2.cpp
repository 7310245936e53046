#include <gtest/gtest.h>

#include <random>
#include <set>

#include "bilab/errors.hpp"
#include "bilab/sl2.hpp"

using namespace bilab;

namespace {

ProductRing R(const char* d) { return parse_ring_descriptor(d); }

// All determinant-1 quadruples by direct scan, no kernels.
std::vector<Mat2> naive_sl2(const ProductRing& ring) {
  std::vector<Mat2> out;
  auto el = ring.elements();
  for (const auto& a : el)
    for (const auto& b : el)
      for (const auto& c : el)
        for (const auto& d : el) {
          Mat2 m{a, b, c, d};
          if (mat_det(ring, m) == ring.one()) out.push_back(m);
        }
  return out;
}

const QuotientKind kAll[] = {QuotientKind::Trivial, QuotientKind::PlusMinusOne, QuotientKind::FullCentre};

}  // namespace

TEST(Sl2Generators, Examples) {
  GroupCtx ctx(R("5"), QuotientKind::Trivial);
  const auto& r = ctx.ring();
  EXPECT_EQ(ctx.make_u(r.zero()), ctx.identity());
  EXPECT_EQ(ctx.make_v(RingElem{2}).rep(), (Mat2{RingElem{1}, RingElem{0}, RingElem{3}, RingElem{1}}));
  EXPECT_EQ(ctx.make_h(RingElem{3}).rep(), (Mat2{RingElem{2}, RingElem{0}, RingElem{0}, RingElem{3}}));
  EXPECT_THROW(ctx.make_h(RingElem{0}), NonUnitError);
  EXPECT_EQ(ctx.mul(ctx.mul(ctx.u(), ctx.v()), ctx.u()), ctx.w());
  EXPECT_EQ(ctx.w().rep(), (Mat2{RingElem{0}, RingElem{1}, RingElem{4}, RingElem{0}}));
}

TEST(Sl2Generators, TauPerComponent) {
  GroupCtx ctx(R("5,2^3,3"), QuotientKind::Trivial);
  EXPECT_EQ(ctx.tau(), (RingElem{2, 3, 2}));
}

TEST(Sl2Identities, ConjugationRules) {
  for (const char* d : {"5", "5,7", "3^2"}) {
    for (auto q : kAll) {
      GroupCtx ctx(R(d), q);
      const auto& r = ctx.ring();
      for (const auto& l : r.elements()) {
        EXPECT_EQ(ctx.conj(ctx.make_u(l), ctx.w()), ctx.make_v(l));
        EXPECT_EQ(ctx.conj(ctx.make_v(l), ctx.w()), ctx.make_u(l));
        for (const auto& mu : r.units()) {
          EXPECT_EQ(ctx.conj(ctx.make_u(l), ctx.make_h(mu)), ctx.make_u(r.mul(l, r.mul(mu, mu))));
        }
      }
    }
  }
}

TEST(Sl2Identities, HIdentityExhaustive) {
  for (const char* d : {"5", "7", "5,7", "3^2", "2^3", "11,13"}) {
    for (auto q : kAll) {
      GroupCtx ctx(R(d), q);
      const auto& r = ctx.ring();
      GroupElem wi = ctx.inv(ctx.w());
      for (const auto& xi : r.units()) {
        GroupElem rhs = ctx.mul(ctx.mul(ctx.mul(ctx.make_v(xi), ctx.make_u(r.inv(xi))), ctx.make_v(xi)), wi);
        ASSERT_EQ(ctx.make_h(xi), rhs) << d << " " << to_string(xi);
      }
    }
  }
}

TEST(Sl2Identities, WeylElementOrder) {
  for (const char* d : {"5", "5,7", "3^2"}) {
    GroupCtx sl2(R(d), QuotientKind::Trivial);
    const auto& r = sl2.ring();
    GroupElem w2 = sl2.pow(sl2.w(), 2);
    EXPECT_EQ(w2.rep(), (Mat2{r.neg(r.one()), r.zero(), r.zero(), r.neg(r.one())}));
    EXPECT_EQ(sl2.pow(sl2.w(), 4), sl2.identity());
    for (auto q : {QuotientKind::PlusMinusOne, QuotientKind::FullCentre}) {
      GroupCtx ctx(R(d), q);
      EXPECT_EQ(ctx.pow(ctx.w(), 2), ctx.identity());
    }
  }
}

TEST(Sl2Identities, UInjectiveInEveryQuotient) {
  for (const char* d : {"5", "5,7", "3^2", "2^3"}) {
    for (auto q : kAll) {
      GroupCtx ctx(R(d), q);
      std::set<GroupElem> seen;
      for (const auto& l : ctx.ring().elements()) seen.insert(ctx.make_u(l));
      EXPECT_EQ(seen.size(), ctx.ring().cardinality()) << d;
    }
  }
}

TEST(Sl2Enumerate, SizesMatchNaiveScan) {
  for (const char* d : {"5", "3", "2^2", "2,3"}) {
    auto ring = R(d);
    auto naive = naive_sl2(ring);
    GroupCtx ctx(ring, QuotientKind::Trivial);
    auto el = ctx.enumerate();
    ASSERT_EQ(el.size(), naive.size()) << d;
    std::set<Mat2> a, b(naive.begin(), naive.end());
    for (const auto& g : el) a.insert(g.rep());
    EXPECT_EQ(a, b) << d;
    EXPECT_TRUE(std::is_sorted(el.begin(), el.end()));
    for (auto q : {QuotientKind::PlusMinusOne, QuotientKind::FullCentre}) {
      GroupCtx qc(ring, q);
      std::set<Mat2> cosets;
      for (const auto& m : naive) cosets.insert(qc.canonical(m));
      EXPECT_EQ(qc.enumerate().size(), cosets.size()) << d;
    }
  }
  EXPECT_EQ(GroupCtx(R("5"), QuotientKind::Trivial).enumerate().size(), 120u);
  EXPECT_EQ(GroupCtx(R("5,7"), QuotientKind::Trivial).enumerate().size(), 40320u);
  EXPECT_EQ(GroupCtx(R("5,7"), QuotientKind::FullCentre).enumerate().size(), 10080u);
}

TEST(Sl2Enumerate, GuardThrows) {
  GroupCtx ctx(R("101"), QuotientKind::Trivial);
  EXPECT_THROW(ctx.enumerate(), TooLargeError);
}

TEST(Sl2Canonical, IdempotentAndConstantOnCosets) {
  for (const char* d : {"5,7", "3^2", "2^3,3"}) {
    GroupCtx plain(R(d), QuotientKind::Trivial);
    auto el = plain.enumerate();
    for (auto q : kAll) {
      GroupCtx ctx(R(d), q);
      const auto& r = ctx.ring();
      for (const auto& g : el) {
        Mat2 c = ctx.canonical(g.rep());
        ASSERT_EQ(ctx.canonical(c), c);
        for (const auto& l : ctx.central()) ASSERT_EQ(ctx.canonical(mat_scale(r, l, g.rep())), c);
        // minimum of the coset
        for (const auto& l : ctx.central()) ASSERT_LE(c, mat_scale(r, l, g.rep()));
      }
    }
  }
}

TEST(Sl2Centre, CentreAndCentralizers) {
  GroupCtx ctx(R("5,7"), QuotientKind::Trivial);
  GroupCarrier car(ctx);
  auto z = car.centre();
  ASSERT_EQ(z.size(), 4u);
  for (const auto& g : z) {
    EXPECT_EQ(g.rep().b, ctx.ring().zero());
    EXPECT_EQ(g.rep().c, ctx.ring().zero());
    EXPECT_EQ(ctx.ring().mul(g.rep().a, g.rep().a), ctx.ring().one());
  }
  EXPECT_EQ(car.centralizer(ctx.identity()).size(), car.size());

  GroupCtx f5(R("5"), QuotientKind::Trivial);
  GroupCarrier c5(f5);
  auto c = c5.centralizer(f5.make_h(RingElem{2}));
  std::set<GroupElem> want;
  for (const auto& l : f5.ring().units()) want.insert(f5.make_h(l));
  EXPECT_EQ(std::set<GroupElem>(c.begin(), c.end()), want);
}

TEST(Sl2Centre, KernelScanMatchesPairwiseCommutation) {
  for (const char* d : {"5", "3^2", "2^3"}) {
    for (auto q : kAll) {
      GroupCtx ctx(R(d), q);
      GroupCarrier car(ctx);
      std::mt19937_64 rng(5);
      for (int k = 0; k < 6; ++k) {
        GroupElem g = car.elements()[rng() % car.size()];
        std::vector<GroupElem> brute;
        for (const auto& x : car.elements()) {
          if (ctx.mul(x, g) == ctx.mul(g, x)) brute.push_back(x);
        }
        EXPECT_EQ(car.centralizer(g), brute) << d;
      }
    }
  }
}

TEST(Sl2Quotient, EquivalenceExamples) {
  auto ring = R("5,7");
  GroupCtx ctx(ring, QuotientKind::Trivial);
  Mat2 a = ctx.mul(ctx.u(), ctx.make_v(RingElem{2, 3})).rep();
  Mat2 neg = mat_scale(ring, ring.neg(ring.one()), a);
  EXPECT_TRUE(quotient_equiv(ring, a, neg, QuotientKind::PlusMinusOne));
  EXPECT_FALSE(quotient_equiv(ring, a, neg, QuotientKind::Trivial));
  Mat2 mixed = mat_scale(ring, RingElem{1, 6}, a);
  EXPECT_TRUE(quotient_equiv(ring, a, mixed, QuotientKind::FullCentre));
  EXPECT_FALSE(quotient_equiv(ring, a, mixed, QuotientKind::PlusMinusOne));
  EXPECT_EQ(central_scalars(ring, QuotientKind::FullCentre).size(), 4u);
  EXPECT_EQ(central_scalars(ring, QuotientKind::PlusMinusOne).size(), 2u);
  EXPECT_EQ(central_scalars(ring, QuotientKind::Trivial).size(), 1u);
}

TEST(Sl2Group, AxiomsOnSampledTriples) {
  std::mt19937_64 rng(9);
  for (auto q : kAll) {
    GroupCtx ctx(R("5,7,11"), q);
    for (int i = 0; i < 2000; ++i) {
      GroupElem a = ctx.random_element(rng), b = ctx.random_element(rng), c = ctx.random_element(rng);
      ASSERT_EQ(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
      ASSERT_EQ(ctx.mul(a, ctx.inv(a)), ctx.identity());
      ASSERT_EQ(ctx.conj(a, b), ctx.mul(ctx.mul(ctx.inv(b), a), b));
      ASSERT_EQ(ctx.pow(a, -3), ctx.inv(ctx.mul(a, ctx.mul(a, a))));
    }
  }
}

TEST(Sl2Group, MakeRejectsBadDeterminant) {
  GroupCtx ctx(R("5"), QuotientKind::Trivial);
  EXPECT_THROW(ctx.make(Mat2{RingElem{2}, RingElem{0}, RingElem{0}, RingElem{2}}), DomainError);
}
