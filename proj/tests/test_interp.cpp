#include <gtest/gtest.h>

#include <random>
#include <set>

#include "bilab/errors.hpp"
#include "bilab/interp_sl2.hpp"

using namespace bilab;

namespace {

ProductRing R(const char* d) { return parse_ring_descriptor(d); }

std::vector<GroupElem> sorted(std::vector<GroupElem> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// Shared SL2(F5 x F7) machinery; the definable sets are cached per process.
struct Big {
  GroupCtx ctx{R("5,7"), QuotientKind::Trivial};
  Sl2Interp in{ctx};
  DefinableSets sets{in, 1};

  static Big& get() {
    static Big b;
    return b;
  }
};

// Oracle for the VHU factors: textbook LDU formulas, evaluated in SL2(R).
Mat2 reassemble(const ProductRing& r, const VHU& f) {
  return mat_mul(r, mat_mul(r, f.v.rep(), f.h.rep()), f.u.rep());
}

MatU matu_of(const Sl2Interp& in, const Mat2& m) {
  return MatU{in.encode(m.a), in.encode(m.b), in.encode(m.c), in.encode(m.d)};
}

}  // namespace

TEST(InterpSets, SizesOverF5xF7) {
  auto& b = Big::get();
  EXPECT_EQ(b.sets.H().size(), 24u);
  EXPECT_EQ(b.sets.H(), sorted(b.in.h_oracle()));
  EXPECT_EQ(b.sets.U().size(), 35u);
  EXPECT_EQ(b.sets.U(), sorted(b.in.u_oracle()));
  EXPECT_EQ(b.sets.V().size(), 35u);
  EXPECT_EQ(b.sets.V(), sorted(b.in.v_oracle()));
  EXPECT_EQ(b.sets.W().size(), 4u);
  EXPECT_EQ(b.sets.W(), b.in.w_oracle());
  EXPECT_EQ(b.sets.Gamma1().size(), 35u * 24u * 35u);
  EXPECT_EQ(b.sets.U01().size(), 4u);
  EXPECT_EQ(b.sets.U01(), sorted(b.in.u01_oracle()));
}

TEST(InterpSets, Gamma1CountMatchesUnitCornerScan) {
  auto& b = Big::get();
  std::size_t brute = 0;
  for (const auto& g : b.sets.carrier().elements()) {
    bool unit = b.ctx.ring().is_unit(g.rep().a);
    ASSERT_EQ(b.in.gamma1_member(g), unit);
    brute += unit;
  }
  EXPECT_EQ(brute, b.sets.Gamma1().size());
}

TEST(InterpSets, SingleFieldExamples) {
  GroupCtx f7(R("7"), QuotientKind::Trivial);
  Sl2Interp in7(f7);
  DefinableSets s7(in7, 2);
  EXPECT_EQ(s7.U().size(), 7u);
  EXPECT_EQ(s7.V(), sorted(in7.v_oracle()));
  EXPECT_EQ(s7.V().size(), 7u);
  // u(3) = u^h(2) (u^h(1))^-1 u(0)
  auto& r = f7.ring();
  GroupElem x = f7.make_h(RingElem{2}), y = f7.make_h(r.one());
  EXPECT_EQ(f7.mul(f7.conj(f7.u(), x), f7.inv(f7.conj(f7.u(), y))), f7.make_u(RingElem{3}));

  GroupCtx f5(R("5"), QuotientKind::Trivial);
  Sl2Interp in5(f5);
  DefinableSets s5(in5, 1);
  EXPECT_EQ(s5.W(), sorted({f5.identity(), f5.w()}));
  EXPECT_EQ(s5.P().size(), 25u);
}

TEST(InterpSets, NegativeControlsDetectStrictCentralizer) {
  for (const char* d : {"3^2", "2^3"}) {
    GroupCtx ctx(R(d), QuotientKind::Trivial);
    Sl2Interp in(ctx);
    DefinableSets sets(in, 1);
    auto h = in.h_oracle();
    EXPECT_GT(sets.H().size(), h.size()) << d;
    EXPECT_TRUE(std::includes(sets.H().begin(), sets.H().end(), h.begin(), h.end())) << d;
  }
  GroupCtx z9(R("3^2"), QuotientKind::Trivial);
  EXPECT_TRUE(z9.commutes(z9.make_u(RingElem{3}), z9.make_h(RingElem{2})));
}

// In PSL2(F5 x F7) the element that is w in the F5 component and 1 in the F7
// component conjugates h(tau) to h(tau) * (-1, 1), a central scalar there.
TEST(InterpSets, FullCentreCentralizerIsLargerThanTorus) {
  GroupCtx ctx(R("5,7"), QuotientKind::FullCentre);
  GroupElem x = ctx.make(Mat2{RingElem{0, 1}, RingElem{1, 0}, RingElem{4, 0}, RingElem{0, 1}});
  EXPECT_TRUE(ctx.commutes(x, ctx.h_tau()));
  Sl2Interp in(ctx);
  EXPECT_FALSE(in.in_h(x));
  GroupCtx pm(R("5,7"), QuotientKind::PlusMinusOne);
  EXPECT_FALSE(pm.commutes(pm.make(x.rep()), pm.h_tau()));
}

TEST(InterpStar, Examples) {
  GroupCtx f7(R("7"), QuotientKind::Trivial);
  Sl2Interp in(f7);
  EXPECT_EQ(in.star_mul(f7.make_u(RingElem{2}), f7.make_u(RingElem{3})), f7.make_u(RingElem{6}));
  for (const auto& y : in.u_oracle()) {
    EXPECT_EQ(in.star_mul(f7.make_u(RingElem{0}), y), f7.make_u(RingElem{0}));
    EXPECT_EQ(in.star_mul(f7.u(), y), y);
  }
  EXPECT_THROW(in.star_mul(f7.v(), f7.u()), DomainError);
}

TEST(InterpStar, InterpretedRingAxioms) {
  for (const char* d : {"5", "7"}) {
    for (auto q : {QuotientKind::Trivial, QuotientKind::PlusMinusOne}) {
      GroupCtx ctx(R(d), q);
      Sl2Interp in(ctx);
      const auto& U = in.u_oracle();
      GroupElem zero = in.encode(ctx.ring().zero()), one = ctx.u();
      for (const auto& a : U) {
        for (const auto& b : U) {
          ASSERT_EQ(in.star_mul(a, b), in.star_mul(b, a));
          ASSERT_EQ(ctx.mul(a, b), ctx.mul(b, a));
          ASSERT_TRUE(in.in_u(ctx.mul(a, b)));
          for (const auto& c : U) {
            ASSERT_EQ(in.star_mul(in.star_mul(a, b), c), in.star_mul(a, in.star_mul(b, c)));
            ASSERT_EQ(in.star_mul(a, ctx.mul(b, c)), ctx.mul(in.star_mul(a, b), in.star_mul(a, c)));
          }
        }
        ASSERT_EQ(in.star_mul(one, a), a);
        ASSERT_EQ(ctx.mul(zero, a), a);
      }
    }
  }
}

TEST(InterpStar, IsomorphismOnProductRing) {
  auto& b = Big::get();
  const auto& r = b.ctx.ring();
  for (const auto& x : r.elements()) {
    for (const auto& y : r.elements()) {
      ASSERT_EQ(b.in.star_mul(b.in.encode(x), b.in.encode(y)), b.in.encode(r.mul(x, y)));
      ASSERT_EQ(b.ctx.mul(b.in.encode(x), b.in.encode(y)), b.in.encode(r.add(x, y)));
    }
  }
}

TEST(InterpMult, RelationEqualsGraph) {
  auto& b = Big::get();
  const auto& r = b.ctx.ring();
  std::set<fo::Tuple> graph;
  for (const auto& x : r.elements()) {
    for (const auto& y : r.elements()) graph.insert({b.in.encode(x), b.in.encode(y), b.in.encode(r.mul(y, x))});
  }
  ASSERT_EQ(graph.size(), 1225u);
  const auto& p = b.sets.P();
  EXPECT_EQ(std::set<fo::Tuple>(p.begin(), p.end()), graph);
  EXPECT_EQ(p.size(), 1225u);
}

TEST(InterpVhu, Examples) {
  GroupCtx f5(R("5"), QuotientKind::Trivial);
  Sl2Interp in(f5);
  GroupElem g = f5.make(Mat2{RingElem{2}, RingElem{1}, RingElem{1}, RingElem{1}});
  VHU f = in.vhu_decompose(g);
  EXPECT_EQ(f.v, f5.make_v(RingElem{2}));
  EXPECT_EQ(f.h, f5.make_h(RingElem{3}));
  EXPECT_EQ(f.u, f5.make_u(RingElem{3}));
  EXPECT_EQ(reassemble(f5.ring(), f), g.rep());
  VHU id = in.vhu_decompose(f5.identity());
  EXPECT_EQ(id.v, f5.make_v(RingElem{0}));
  EXPECT_EQ(id.h, f5.make_h(RingElem{1}));
  EXPECT_EQ(id.u, f5.make_u(RingElem{0}));
  for (const auto& l : f5.ring().elements()) {
    VHU fu = in.vhu_decompose(f5.make_u(l));
    EXPECT_EQ(fu.v, f5.identity());
    EXPECT_EQ(fu.h, f5.identity());
    EXPECT_EQ(fu.u, f5.make_u(l));
  }
  EXPECT_THROW(in.vhu_decompose(f5.w()), DomainError);
}

TEST(InterpVhu, ReassemblesAndMatchesLduFormulas) {
  auto& b = Big::get();
  const auto& r = b.ctx.ring();
  for (const auto& g : b.sets.Gamma1()) {
    VHU f = b.in.vhu_decompose(g);
    const Mat2& m = g.rep();
    RingElem ai = r.inv(m.a);
    ASSERT_EQ(f.v, b.ctx.make_v(r.neg(r.mul(ai, m.c))));
    ASSERT_EQ(f.h, b.ctx.make_h(ai));
    ASSERT_EQ(f.u, b.ctx.make_u(r.mul(ai, m.b)));
    ASSERT_EQ(b.ctx.mul(b.ctx.mul(f.v, f.h), f.u), g);
  }
}

TEST(InterpVhu, TildeCharacterizations) {
  for (auto q : {QuotientKind::Trivial, QuotientKind::PlusMinusOne}) {
    GroupCtx ctx(R("5"), q);
    Sl2Interp in(ctx);
    TildeChecker tc(in);
    std::size_t literal_differs = 0;
    for (const auto& g : ctx.enumerate()) {
      if (!in.gamma1_member(g)) continue;
      VHU f = in.vhu_decompose(g);
      ASSERT_EQ(tc.v_part(g), std::vector<GroupElem>{f.v}) << to_string(g);
      ASSERT_EQ(tc.u_part(g), std::vector<GroupElem>{f.u}) << to_string(g);
      ASSERT_EQ(tc.h_part(g), std::vector<GroupElem>{f.h}) << to_string(g);
      if (tc.v_part_literal(g) != std::vector<GroupElem>{f.v}) ++literal_differs;
    }
    EXPECT_GT(literal_differs, 0u);
  }
}

TEST(InterpTwist, Examples) {
  GroupCtx f5(R("5"), QuotientKind::Trivial);
  Sl2Interp in5(f5);
  EXPECT_EQ(in5.choose_w_twist(f5.w()), f5.w());
  EXPECT_EQ(f5.mul(f5.w(), f5.w()).rep().a, RingElem{4});
  EXPECT_EQ(in5.choose_w_twist(f5.u()), f5.identity());

  GroupCtx ctx(R("5,7"), QuotientKind::Trivial);
  Sl2Interp in(ctx);
  GroupElem g = ctx.make(Mat2{RingElem{0, 3}, RingElem{1, 0}, RingElem{4, 0}, RingElem{0, 5}});
  GroupElem want = ctx.make(Mat2{RingElem{0, 1}, RingElem{1, 0}, RingElem{4, 0}, RingElem{0, 1}});
  EXPECT_EQ(in.choose_w_twist(g), want);
  EXPECT_TRUE(in.in_w(want));
}

TEST(InterpTwist, AlwaysLandsInGamma1) {
  auto& b = Big::get();
  for (const auto& g : b.sets.carrier().elements()) {
    GroupElem x = b.in.choose_w_twist(g);
    ASSERT_TRUE(b.in.in_w(x));
    ASSERT_TRUE(b.ctx.ring().is_unit(b.ctx.mul(g, x).rep().a));
  }
}

TEST(InterpTheta, DirectExamples) {
  GroupCtx f5(R("5"), QuotientKind::Trivial);
  Sl2Interp in(f5);
  auto u = [&](std::uint32_t x) { return f5.make_u(RingElem{x}); };
  EXPECT_EQ(in.theta_direct(f5.identity()), (MatU{u(1), u(0), u(0), u(1)}));
  EXPECT_EQ(in.theta_direct(f5.w()), (MatU{u(0), u(1), u(4), u(0)}));
  GroupElem g = f5.make(Mat2{RingElem{2}, RingElem{1}, RingElem{1}, RingElem{1}});
  EXPECT_EQ(in.theta_direct(g), (MatU{u(2), u(1), u(1), u(1)}));
  EXPECT_EQ(in.theta_definable(f5.identity()), in.theta_direct(f5.identity()));
  EXPECT_EQ(in.theta_definable(f5.w()), in.theta_direct(f5.w()));
}

TEST(InterpTheta, RestrictedExamples) {
  GroupCtx f7(R("7"), QuotientKind::Trivial);
  Sl2Interp in(f7);
  GroupElem u3 = f7.make_u(RingElem{3});
  EXPECT_EQ(in.theta_restricted(u3), (MatU{f7.u(), u3, f7.identity(), f7.u()}));
  for (const auto& xi : f7.ring().units()) {
    MatU t = in.theta_restricted(f7.make_h(xi));
    EXPECT_EQ(t, (MatU{f7.make_u(f7.ring().inv(xi)), f7.identity(), f7.identity(), f7.make_u(xi)}));
    EXPECT_EQ(in.star_mul(t.d, t.a), f7.u());
  }
  EXPECT_THROW(in.theta_restricted(f7.make(Mat2{RingElem{2}, RingElem{1}, RingElem{1}, RingElem{4}})), DomainError);

  GroupCtx ctx(R("5,7"), QuotientKind::Trivial);
  Sl2Interp in57(ctx);
  GroupElem x = ctx.make(Mat2{RingElem{1, 0}, RingElem{0, 1}, RingElem{0, 6}, RingElem{1, 0}});
  ASSERT_TRUE(in57.in_w(x));
  EXPECT_EQ(in57.matu_decode(in57.theta_restricted(x)), x.rep());
}

TEST(InterpTheta, RestrictedAgreesWithDirectOnSubgroups) {
  for (auto q : {QuotientKind::Trivial, QuotientKind::PlusMinusOne, QuotientKind::FullCentre}) {
    GroupCtx ctx(R("5,7"), q);
    Sl2Interp in(ctx);
    for (const auto& part : {in.u_oracle(), in.v_oracle(), in.h_oracle(), in.w_oracle()}) {
      for (const auto& g : part) {
        ASSERT_TRUE(in.represents(in.theta_restricted(g), g)) << to_string(g);
        ASSERT_TRUE(quotient_equiv(ctx.ring(), in.matu_decode(in.theta_restricted(g)),
                                   in.matu_decode(in.theta_direct(g)), q));
      }
    }
  }
}

TEST(InterpTheta, DefinableEqualsDirectExhaustive) {
  for (const char* d : {"5", "7", "5,7"}) {
    GroupCtx ctx(R(d), QuotientKind::Trivial);
    Sl2Interp in(ctx);
    for (const auto& g : ctx.enumerate()) ASSERT_EQ(in.theta_definable(g), in.theta_direct(g)) << d << to_string(g);
  }
}

TEST(InterpTheta, DefinableRepresentsElementInQuotients) {
  for (auto q : {QuotientKind::PlusMinusOne, QuotientKind::FullCentre}) {
    GroupCtx ctx(R("5,7"), q);
    Sl2Interp in(ctx);
    for (const auto& g : ctx.enumerate()) ASSERT_TRUE(in.represents(in.theta_definable(g), g)) << to_string(g);
  }
}

TEST(InterpTheta, MatUArithmetic) {
  GroupCtx ctx(R("5,7"), QuotientKind::Trivial);
  Sl2Interp in(ctx);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    GroupElem g = ctx.random_element(rng), h = ctx.random_element(rng);
    MatU x = in.theta_direct(g), y = in.theta_direct(h);
    ASSERT_EQ(in.matu_mul(x, y), matu_of(in, mat_mul(ctx.ring(), g.rep(), h.rep())));
    ASSERT_EQ(in.matu_det(x), ctx.u());
    ASSERT_EQ(in.matu_mul(x, in.matu_adj(x)), in.theta_direct(ctx.identity()));
  }
}

TEST(InterpRoundtrip, RingAndGroup) {
  auto& b = Big::get();
  for (const auto& r : b.ctx.ring().elements()) ASSERT_EQ(b.in.roundtrip_ring(r), r);
  for (auto q : {QuotientKind::Trivial, QuotientKind::PlusMinusOne, QuotientKind::FullCentre}) {
    GroupCtx f5(R("5"), q);
    Sl2Interp in(f5);
    for (const auto& g : f5.enumerate()) ASSERT_EQ(in.roundtrip_group(g), g);
  }
  std::mt19937_64 rng(8);
  GroupCtx ps(R("5,7"), QuotientKind::FullCentre);
  Sl2Interp in(ps);
  for (int i = 0; i < 2000; ++i) {
    GroupElem g = ps.random_element(rng);
    GroupElem back = in.roundtrip_group(g);
    ASSERT_TRUE(quotient_equiv(ps.ring(), back.rep(), g.rep(), QuotientKind::FullCentre));
    ASSERT_EQ(back, g);
  }
}

TEST(InterpReport, CompareSets) {
  GroupCtx f5(R("5"), QuotientKind::Trivial);
  auto rep = compare_sets("x", {f5.u(), f5.v(), f5.w()}, {f5.w(), f5.u()});
  EXPECT_FALSE(rep.equal);
  EXPECT_EQ(rep.computed_size, 3u);
  EXPECT_EQ(rep.oracle_size, 2u);
  EXPECT_EQ(rep.counterexamples, std::vector<GroupElem>{f5.v()});
  EXPECT_TRUE(compare_sets("y", {f5.u(), f5.w()}, {f5.w(), f5.u()}).equal);
}
