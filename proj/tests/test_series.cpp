#include <gtest/gtest.h>

#include <random>

#include "mobiles/fixed_point.hpp"

using namespace mobiles;

namespace {

AuxPoly P(const std::string& s) { return parse_poly(s); }

AuxPoly random_poly(std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-5, 5), ex(0, 3), count(0, 4);
  const char* vars[] = {"y", "z1", "g"};
  AuxPoly p;
  int n = count(rng);
  for (int i = 0; i < n; ++i) {
    AuxPoly t(Rational(coef(rng), 1 + ex(rng)));
    for (auto v : vars) t *= AuxPoly::var(v, unsigned(ex(rng)));
    p += t;
  }
  return p;
}

GSeries random_series(std::mt19937& rng, int order) {
  GSeries s(order, "g");
  for (int n = 0; n <= order; ++n) s[n] = random_poly(rng);
  return s;
}

// closed forms computed here, independently of the solver
Integer ternary(unsigned n) { return factorial(3 * n) / (factorial(n) * factorial(2 * n + 1)); }
Integer quartic(unsigned n) {
  Integer p = 1;
  for (unsigned i = 0; i < n; ++i) p *= 3;
  return p * factorial(2 * n) / (factorial(n) * factorial(n + 1));
}

}  // namespace

TEST(AuxPoly, ProductOfConjugates) { EXPECT_EQ(P("(1+y)*(1-y)"), P("1-y^2")); }

TEST(AuxPoly, SubstituteMinusOneKillsFactor) {
  AuxPoly q = P("3+z1*y^2-7/3*y");
  EXPECT_TRUE((P("1+y") * q).substitute("y", AuxPoly(-1)).is_zero());
}

TEST(AuxPoly, EvaluateForestCoefficientAtOne) {
  EXPECT_EQ(P("6*(3+5*y)").substitute("y", AuxPoly(1)), AuxPoly(48));
}

TEST(AuxPoly, ParseAndPrintRoundTrip) {
  AuxPoly p = P("2 + 8*z1 + 5*z1^2");
  EXPECT_EQ(p.to_string(), "2+8*z1+5*z1^2");
  EXPECT_EQ(P(p.to_string()), p);
  EXPECT_EQ(P("-1/2*y^3+y").to_string(), "y-1/2*y^3");
  EXPECT_EQ(AuxPoly().to_string(), "0");
}

TEST(AuxPoly, ParseErrors) {
  EXPECT_THROW(P("1+"), Error);
  EXPECT_THROW(P("(y"), Error);
  EXPECT_THROW(P("y/z1"), Error);
  EXPECT_THROW(parse_rational("1/0"), Error);
}

TEST(AuxPoly, ExponentOverflowThrows) {
  AuxPoly y200 = AuxPoly::var("y", 200);
  EXPECT_THROW(y200 * y200, Error);
}

TEST(AuxPoly, RingAxiomsOnRandomTriples) {
  std::mt19937 rng(12345);
  for (int it = 0; it < 200; ++it) {
    AuxPoly a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_TRUE((a - a).is_zero());
  }
}

TEST(AuxPoly, CoefficientAndDegree) {
  AuxPoly p = P("3 + y*z1 + 4*y^2*z1^3");
  EXPECT_EQ(p.degree("y"), 2u);
  EXPECT_EQ(p.coefficient("y", 2), P("4*z1^3"));
  EXPECT_EQ(p.coefficient("y", 0), AuxPoly(3));
  EXPECT_EQ(p.evaluate({{"y", 2}, {"z1", 1}}), Rational(3 + 2 + 16));
}

TEST(GSeries, GeometricSeries) {
  GSeries a = GSeries::monomial(3, 1, 1, "g");
  GSeries r = a.inverse_of_one_minus();
  for (int n = 0; n <= 3; ++n) EXPECT_EQ(r[n], AuxPoly(1));
}

TEST(GSeries, InverseNeedsZeroConstant) {
  GSeries a = GSeries::constant(3, 1, "g");
  EXPECT_THROW(a.inverse_of_one_minus(), Error);
  try {
    a.inverse_of_one_minus();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::non_invertible);
  }
}

TEST(GSeries, InverseTimesSelfIsOne) {
  std::mt19937 rng(7);
  GSeries s = random_series(rng, 6);
  s[0] = AuxPoly(Rational(3, 2));
  GSeries prod = s * s.inverse();
  EXPECT_EQ(prod, GSeries::constant(6, 1, "g"));
}

TEST(GSeries, RingAxiomsOnRandomTriples) {
  std::mt19937 rng(99);
  for (int it = 0; it < 30; ++it) {
    GSeries a = random_series(rng, 4), b = random_series(rng, 4), c = random_series(rng, 4);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
  }
}

TEST(GSeries, DerivativeAndPow) {
  GSeries x = GSeries::from_coefficients(4, {1, 1}, "g");  // 1+g
  GSeries p = x.pow(3);
  EXPECT_EQ(p, GSeries::from_coefficients(4, {1, 3, 3, 1}, "g"));
  EXPECT_EQ(p.derivative(), GSeries::from_coefficients(3, {3, 6, 3}, "g"));
  GSeries q = GSeries::constant(2, P("y^3+y"), "g");
  EXPECT_EQ(q.derivative("y")[0], P("3*y^2+1"));
}

TEST(GSeries, Regrade) {
  GSeries s = GSeries::from_coefficients(3, {1, P("g+z1"), P("g^2+g*z1")});
  GSeries r = s.regrade("g", 2);
  EXPECT_EQ(r[0], P("1+z1"));
  EXPECT_EQ(r[1], P("1+z1"));
  EXPECT_EQ(r[2], AuxPoly(1));
}

TEST(ZLaurent, Extractions) {
  GSeries one = GSeries::constant(2, 1);
  ZLaurent q(2, -4, 4);
  q.add(1, one);
  q.add(-1, one);
  ZLaurent zp(2, -4, 4), zm(2, -4, 4);
  zp.add(1, one);
  zm.add(-1, one);
  EXPECT_EQ(q.extract(Extract::plus), zp);
  EXPECT_EQ(q.extract(Extract::minus), zm);
  EXPECT_TRUE(q.extract(Extract::zero).is_zero());
  EXPECT_EQ(q.extract(Extract::strict_neg), zm);
  EXPECT_EQ(q.extract(Extract::strict_pos), zp);
  ZLaurent sq = q * q;  // z^2 + 2 + z^-2
  EXPECT_EQ(sq.coeff(0), GSeries::constant(2, 2));
  EXPECT_EQ(sq.coeff(2), one);
  EXPECT_EQ(sq.coeff(1), GSeries(2));
}

TEST(ZLaurent, WindowClipsProducts) {
  ZLaurent q(1, -1, 1);
  q.add(1, GSeries::constant(1, 1));
  EXPECT_TRUE((q * q).is_zero());
}

TEST(FixedPoint, TrivialSystem) {
  FixedPointSystem sys("g");
  sys.add_series("R", {}, [](const Env& e) { return e.constant(1); });
  Solution s = sys.solve(5);
  EXPECT_EQ(s.s("R"), GSeries::constant(5, 1, "g"));
}

TEST(FixedPoint, QuarticMapSeries) {
  FixedPointSystem sys("g");
  sys.add_series("R", {{"R", 1}}, [](const Env& e) { return e.constant(1) + e.mono(1, 3) * e.s("R") * e.s("R"); });
  Solution s = sys.solve(4);
  for (unsigned n = 0; n <= 4; ++n) EXPECT_EQ(s.s("R")[int(n)], AuxPoly(Rational(quartic(n)))) << n;
  EXPECT_EQ(s.s("R")[4], AuxPoly(1134));
  EXPECT_LE(s.sweeps, 4 + 2);
  EXPECT_TRUE(sys.residuals(s).empty());
}

TEST(FixedPoint, TernaryKernel) {
  FixedPointSystem sys("x");
  sys.add_series("q", {{"q", 1}}, [](const Env& e) { return e.constant(1) + e.mono(1, 1) * e.s("q").pow(3); });
  Solution s = sys.solve(5);
  const long expect[] = {1, 1, 3, 12, 55, 273};
  for (unsigned n = 0; n <= 5; ++n) {
    EXPECT_EQ(ternary(n), Integer(expect[n]));
    EXPECT_EQ(s.s("q")[int(n)], AuxPoly(Rational(ternary(n))));
  }
}

TEST(FixedPoint, ZeroIncrementCycleIsNotContractive) {
  FixedPointSystem sys("g");
  sys.add_series("A", {{"B", 0}}, [](const Env& e) { return e.constant(1) + e.s("B"); });
  sys.add_series("B", {{"A", 0}}, [](const Env& e) { return e.s("A"); });
  try {
    sys.solve(3);
    FAIL() << "expected NotContractive";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_contractive);
  }
}

TEST(FixedPoint, MislabelledIncrementIsCaughtBySweepCheck) {
  FixedPointSystem sys("g");
  // declared increment 1 but the term has none: R = 1 + R/2
  sys.add_series("R", {{"R", 1}}, [](const Env& e) {
    GSeries h = e.s("R");
    h.scale(AuxPoly(Rational(1, 2)));
    return e.constant(1) + h;
  });
  try {
    sys.solve(3);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_TRUE(e.code() == ErrorCode::not_contractive || e.code() == ErrorCode::no_convergence);
  }
}

TEST(FixedPoint, LaurentSystemBackSubstitutesAndIsWindowSound) {
  // Q = R/z + z + g*y*Q^3 with R = 1 + g [Q^3/z]_0 R (planar forest reduction)
  FixedPointSystem sys("g");
  sys.set_window(-3 * 5, 3 * 5);
  sys.add_series("R", {{"R", 1}, {"Q", 1}}, [](const Env& e) {
    return e.constant(1) + e.l("Q").pow(3).coeff(1) * e.s("R") * e.mono(1, 1);
  });
  sys.add_laurent("Q", {{"R", 0}, {"Q", 1}}, [](const Env& e) {
    ZLaurent q = e.z_power(-1, e.s("R")) + e.z_power(1, e.constant(1));
    return q + e.l("Q").pow(3).scaled(e.mono(1, P("y")));
  });
  Solution s = sys.solve(4);
  EXPECT_TRUE(sys.residuals(s).empty());
  EXPECT_TRUE(window_sound(sys, s));
  const GSeries& R = s.s("R");
  EXPECT_EQ(R[1], AuxPoly(3));
  EXPECT_EQ(R[2], P("6*(3+5*y)"));
  EXPECT_EQ(R[3], P("15*(9+30*y+28*y^2)"));
  EXPECT_EQ(R[4], P("18*(63+315*y+570*y^2+385*y^3)"));
}
