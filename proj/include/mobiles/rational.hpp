#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>

#include "mobiles/errors.hpp"

namespace mobiles {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

inline Rational make_rational(long long num, long long den = 1) { return Rational(num, den); }

/// Accepts "p", "-p" or "p/q".
inline Rational parse_rational(const std::string& text) {
  try {
    auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(Integer(text));
    Integer n(text.substr(0, slash));
    Integer d(text.substr(slash + 1));
    if (d == 0) fail(ErrorCode::invalid_input, "zero denominator in '" + text + "'");
    return Rational(n, d);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(ErrorCode::invalid_input, "not a rational number: '" + text + "'");
  }
}

inline std::string to_string(const Rational& q) { return q.str(); }

inline Integer numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rational& q) { return denominator_of(q) == 1; }

inline Integer factorial(unsigned n) {
  Integer r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

inline Integer binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  Integer r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

}  // namespace mobiles
