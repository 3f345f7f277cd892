#include <gtest/gtest.h>

#include "mobiles/singularity.hpp"

using namespace mobiles;

TEST(Singularity, RecurrenceMatchesFactorialSum) {
  // at u = 1/54 the terms shrink like 2^-n, so 60 terms agree with the full sum to ~1e-21
  Real direct = F_partial_direct(Rational(1, 54), 60);
  FValues v = evaluate_F(Real(1) / 54, Real("1e-40"));
  EXPECT_LT(abs(direct - v.F), Real("1e-18"));
  EXPECT_EQ(evaluate_F(Real(0)).F, 0);
  EXPECT_THROW(evaluate_F(Real("0.04")), Error);
}

TEST(Singularity, FIsIncreasingAndConvex) {
  Real prev = -1, prev_d = -1;
  for (int i = 0; i < 20; ++i) {
    Real u = Real(i) / (27 * 21);
    FValues v = evaluate_F(u);
    EXPECT_GT(v.F, prev);
    EXPECT_GT(v.dF, prev_d);
    prev = v.F;
    prev_d = v.dF;
  }
}

TEST(Singularity, SquareRootPointForModerateY) {
  for (const char* y : {"0.5", "1", "2"}) {
    ForestSingularity s = forest_singularity(Real(y));
    EXPECT_GT(s.u_star, 0) << y;
    EXPECT_LT(s.u_star * 27, 1) << y;
    EXPECT_LE(abs(s.dg_du), Real(1e-12) * abs(s.u_star * s.d2g_du2)) << y;
    EXPECT_LT(s.d2g_du2, 0) << y;
    EXPECT_GT(s.g_star, 0) << y;
    EXPECT_EQ(s.classification, SingularityClass::square_root);
  }
}

TEST(Singularity, LargerYPushesTowardTreeLimit) {
  Real u1 = forest_singularity(Real(1)).u_star, u2 = forest_singularity(Real(2)).u_star;
  EXPECT_LT(u1, u2);
  EXPECT_THROW(forest_singularity(Real(-1)), Error);
}

TEST(Singularity, SpanningTreeFamily) {
  SpanningTreeSingularity s = spanning_tree_singularity();
  EXPECT_EQ(s.alpha_star, Rational(1, 27));
  EXPECT_EQ(s.classification, SingularityClass::tree_log);
  EXPECT_LT(abs(s.amplitude / s.limit_amplitude - 1), Real("1e-3"));
}
