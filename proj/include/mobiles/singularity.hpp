#pragma once

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "mobiles/errors.hpp"
#include "mobiles/rational.hpp"

namespace mobiles {

using Real = boost::multiprecision::cpp_dec_float_50;

enum class SingularityClass { square_root, tree_log };

inline std::string to_string(SingularityClass c) { return c == SingularityClass::square_root ? "square_root" : "tree_log"; }

/// F(u) = sum_{n>=1} (3n)!/(n!n!(n+1)!) u^n with its first two derivatives.
template <class T>
struct FValuesOf {
  T F = 0, dF = 0, d2F = 0;
  long terms = 0;
};
using FValues = FValuesOf<Real>;

/// Sums F, F', F'' by the term recurrence c_{n+1}/c_n = (3n+3)(3n+2)(3n+1)/((n+1)^2 (n+2)).
/// The ratio of consecutive terms stays below 27u, which bounds the tail geometrically.
template <class T>
FValuesOf<T> evaluate_F_as(const T& u, const T& rel_tol) {
  using std::abs;
  if (u < 0 || u * 27 >= 1) fail(ErrorCode::invalid_input, "F is only summed on [0, 1/27)");
  FValuesOf<T> v;
  if (u == 0) return v;
  T q = u * 27;
  T bound = q / (1 - q);
  T t = u * 3;  // c_1 u
  for (long n = 1;; ++n) {
    T tn = t * n;
    v.F += t;
    v.dF += tn;
    v.d2F += tn * (n - 1);
    v.terms = n;
    // the n^2 weight of F'' dominates the tail
    if (n > 4 && n % 16 == 0 && t * ((n + 1) * (n + 1)) * bound * (1 + 2 / (1 - q)) <= rel_tol * v.d2F) break;
    if (n > 50'000'000) fail(ErrorCode::tolerance_not_met, "F did not converge within the term budget");
    if (n < 600'000) {
      long long a = (3LL * n + 3) * (3LL * n + 2) * (3LL * n + 1), d = (n + 1LL) * (n + 1LL) * (n + 2LL);
      t = t * u * a / d;
    } else {
      t *= T(3 * n + 3) * T(3 * n + 2) * T(3 * n + 1) / (T(n + 1) * T(n + 1) * T(n + 2)) * u;
    }
  }
  v.dF /= u;
  v.d2F /= u * u;
  return v;
}

inline FValues evaluate_F(const Real& u, const Real& rel_tol = Real("1e-26")) { return evaluate_F_as<Real>(u, rel_tol); }

/// Direct factorial evaluation of the partial sum up to `terms`, for cross-checking the recurrence.
inline Real F_partial_direct(const Rational& u, unsigned terms) {
  Rational s = 0, p = 1;
  for (unsigned n = 1; n <= terms; ++n) {
    p *= u;
    s += Rational(factorial(3 * n), factorial(n) * factorial(n) * factorial(n + 1)) * p;
  }
  return Real(numerator_of(s)) / Real(denominator_of(s));
}

struct ForestSingularity {
  Real y_value;
  Real u_star;
  Real g_star;
  Real dg_du;    // at u_star
  Real d2g_du2;  // at u_star
  Real F_star;
  SingularityClass classification = SingularityClass::square_root;
  int iterations = 0;
};

/// Radius of convergence of the forest series at fixed y > 0: u* solves y = F(u*) + u* F'(u*),
/// g* = u*(y - F(u*))/y^2.
inline ForestSingularity forest_singularity(const Real& y, double tol = 1e-12) {
  if (!(y > 0) || !boost::multiprecision::isfinite(y)) fail(ErrorCode::invalid_input, "y must be finite and positive");
  if (!(tol > 0)) fail(ErrorCode::invalid_input, "tolerance must be positive");
  // a long double pass narrows the bracket, the final bisection steps run at full precision
  long double yd = y.convert_to<long double>();
  auto hd = [&](long double u) {
    auto f = evaluate_F_as<long double>(u, 1e-19L);
    return f.F + u * f.dF - yd;
  };
  long double lod = 0, hid = 1.0L / 27;
  long double gap = hid;
  for (;;) {
    gap /= 4;
    if (gap * 27 < 1e-6L) fail(ErrorCode::tolerance_not_met, "u* lies too close to 1/27 for direct summation; y is too large");
    long double cand = hid - gap;
    if (hd(cand) > 0) {
      hid = cand;
      break;
    }
    lod = cand;
  }
  ForestSingularity s;
  s.y_value = y;
  while (hid - lod > 1e-16L * lod || lod == 0) {
    long double mid = (lod + hid) / 2;
    (hd(mid) > 0 ? hid : lod) = mid;
    ++s.iterations;
  }
  auto h = [&](const Real& u) {
    FValues f = evaluate_F(u);
    return f.F + u * f.dF - y;
  };
  // re-validate the bracket in full precision, widening if rounding misplaced it
  Real width = Real(1e-14) * Real(lod);
  Real lo = Real(lod) - width, hi = Real(hid) + width;
  if (hi * 27 >= 1) hi = (lo + Real(1) / 27) / 2;
  for (int widen = 0; h(lo) > 0 || h(hi) < 0; ++widen) {
    if (widen > 20) fail(ErrorCode::tolerance_not_met, "could not bracket u* in full precision");
    width *= 16;
    lo = max(Real(0), lo - width);
    hi = min((hi + Real(1) / 27) / 2, hi + width);
  }
  Real rel = Real(tol) / 20;
  while (hi - lo > rel * lo) {
    Real mid = (lo + hi) / 2;
    (h(mid) > 0 ? hi : lo) = mid;
    if (++s.iterations > 400) fail(ErrorCode::tolerance_not_met, "bisection did not converge");
  }
  s.u_star = (lo + hi) / 2;
  FValues f = evaluate_F(s.u_star);
  s.F_star = f.F;
  Real y2 = y * y;
  s.g_star = s.u_star * (y - f.F) / y2;
  s.dg_du = (y - f.F - s.u_star * f.dF) / y2;
  s.d2g_du2 = -(2 * f.dF + s.u_star * f.d2F) / y2;
  if (!(s.d2g_du2 < 0) || !(f.F < y) || !(s.g_star > 0))
    fail(ErrorCode::tolerance_not_met, "singular point does not satisfy the square-root sign conditions");
  if (abs(s.dg_du) > Real(tol) * abs(s.u_star * s.d2g_du2))
    fail(ErrorCode::tolerance_not_met, "dg/du does not vanish to the requested tolerance");
  return s;
}

/// The y -> infinity family: F itself is singular at alpha* = 1/27. Checks the coefficient
/// asymptotics c_n 27^-n n^2 -> sqrt(3)/(2 pi) that make F(1/27) finite and F' logarithmically
/// divergent there, which is the tree-like class.
struct SpanningTreeSingularity {
  Rational alpha_star{1, 27};
  SingularityClass classification = SingularityClass::tree_log;
  Real amplitude;        // n^2 c_n 27^-n at the largest n sampled
  Real limit_amplitude;  // sqrt(3)/(2 pi)
};

inline SpanningTreeSingularity spanning_tree_singularity(long nmax = 20000) {
  SpanningTreeSingularity s;
  Real a = Real(3) / 27;  // c_1 27^-1
  for (long n = 1; n < nmax; ++n) a *= Real((3 * n + 3)) * (3 * n + 2) * (3 * n + 1) / (Real(n + 1) * (n + 1) * (n + 2) * 27);
  s.amplitude = a * nmax * nmax;
  s.limit_amplitude = sqrt(Real(3)) / (2 * boost::math::constants::pi<Real>());
  // c_n 27^-n = A n^-2 (1 + O(1/n))
  if (abs(s.amplitude / s.limit_amplitude - 1) > Real(10) / nmax)
    fail(ErrorCode::tolerance_not_met, "coefficient asymptotics do not match the tree-like class");
  return s;
}

}  // namespace mobiles
