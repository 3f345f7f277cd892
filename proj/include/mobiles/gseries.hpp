#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "mobiles/aux_poly.hpp"

namespace mobiles {

/// Truncated power series c_0 + c_1 t + ... + c_N t^N in a grading variable t,
/// with AuxPoly coefficients. `grading` names t: "faces" or an auxiliary variable.
class GSeries {
 public:
  GSeries() : GSeries(0) {}
  explicit GSeries(int order, std::string grading = "faces") : c_(std::size_t(std::max(order, 0)) + 1), grading_(std::move(grading)) {}

  static GSeries constant(int order, const AuxPoly& c, std::string grading = "faces") {
    GSeries s(order, std::move(grading));
    s.c_[0] = c;
    return s;
  }

  static GSeries monomial(int order, int degree, const AuxPoly& c, std::string grading = "faces") {
    GSeries s(order, std::move(grading));
    if (degree <= order) s.c_[std::size_t(degree)] = c;
    return s;
  }

  /// Builds a series from coefficient list; entries past `order` are dropped.
  static GSeries from_coefficients(int order, const std::vector<AuxPoly>& cs, std::string grading = "faces") {
    GSeries s(order, std::move(grading));
    for (std::size_t i = 0; i < cs.size() && int(i) <= order; ++i) s.c_[i] = cs[i];
    return s;
  }

  int order() const { return int(c_.size()) - 1; }
  const std::string& grading() const { return grading_; }
  void set_grading(std::string g) { grading_ = std::move(g); }

  const AuxPoly& operator[](int n) const { return c_[std::size_t(n)]; }
  AuxPoly& operator[](int n) { return c_[std::size_t(n)]; }

  AuxPoly coefficient(int n) const { return n >= 0 && n <= order() ? c_[std::size_t(n)] : AuxPoly(); }
  const std::vector<AuxPoly>& coefficients() const { return c_; }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const AuxPoly& p) { return p.is_zero(); });
  }

  /// Smallest n with c_n != 0, or -1 for the zero series.
  int valuation() const {
    for (int n = 0; n <= order(); ++n)
      if (!c_[std::size_t(n)].is_zero()) return n;
    return -1;
  }

  GSeries truncated(int order) const {
    GSeries s(order, grading_);
    for (int n = 0; n <= std::min(order, this->order()); ++n) s.c_[std::size_t(n)] = c_[std::size_t(n)];
    return s;
  }

  GSeries& operator+=(const GSeries& o) {
    if (o.order() < order()) c_.resize(std::size_t(o.order()) + 1);
    for (int n = 0; n <= order(); ++n) c_[std::size_t(n)] += o.c_[std::size_t(n)];
    return *this;
  }

  GSeries& operator-=(const GSeries& o) {
    if (o.order() < order()) c_.resize(std::size_t(o.order()) + 1);
    for (int n = 0; n <= order(); ++n) c_[std::size_t(n)] -= o.c_[std::size_t(n)];
    return *this;
  }

  GSeries operator-() const {
    GSeries r = *this;
    for (auto& p : r.c_) p = -p;
    return r;
  }

  /// Multiplies every coefficient by a polynomial.
  GSeries& scale(const AuxPoly& a) {
    for (auto& p : c_) p = p * a;
    return *this;
  }

  friend GSeries operator+(GSeries a, const GSeries& b) { return a += b; }
  friend GSeries operator-(GSeries a, const GSeries& b) { return a -= b; }

  friend GSeries operator*(const GSeries& a, const GSeries& b) {
    int N = std::min(a.order(), b.order());
    GSeries r(N, a.grading_);
    std::vector<AuxPoly::Term> buf;
    for (int n = 0; n <= N; ++n) {
      buf.clear();
      for (int i = 0; i <= n; ++i) {
        const AuxPoly& x = a.c_[std::size_t(i)];
        if (x.is_zero()) continue;
        const AuxPoly& y = b.c_[std::size_t(n - i)];
        if (y.is_zero()) continue;
        AuxPoly::append_product(buf, x, y);
      }
      if (!buf.empty()) r.c_[std::size_t(n)] = AuxPoly::from_terms(std::move(buf));
      buf = {};
    }
    return r;
  }

  GSeries& operator*=(const GSeries& o) { *this = *this * o; return *this; }

  friend bool operator==(const GSeries& a, const GSeries& b) { return a.c_ == b.c_; }
  friend bool operator!=(const GSeries& a, const GSeries& b) { return !(a == b); }

  GSeries pow(unsigned k) const {
    GSeries result = constant(order(), AuxPoly(1), grading_), base = *this;
    while (k) {
      if (k & 1) result *= base;
      k >>= 1;
      if (k) base *= base;
    }
    return result;
  }

  /// 1/(1-a); a must have zero constant term.
  GSeries inverse_of_one_minus() const {
    if (!c_[0].is_zero()) fail(ErrorCode::non_invertible, "inverse_of_one_minus needs a zero constant term");
    int N = order();
    GSeries r = constant(N, AuxPoly(1), grading_);
    // r_n = sum_{i=1..n} a_i r_{n-i}
    for (int n = 1; n <= N; ++n) {
      std::vector<AuxPoly::Term> buf;
      for (int i = 1; i <= n; ++i) AuxPoly::append_product(buf, c_[std::size_t(i)], r.c_[std::size_t(n - i)]);
      r.c_[std::size_t(n)] = AuxPoly::from_terms(std::move(buf));
    }
    return r;
  }

  /// Multiplicative inverse; the constant term must be a nonzero rational.
  GSeries inverse() const {
    if (!c_[0].is_constant() || c_[0].is_zero())
      fail(ErrorCode::non_invertible, "constant term is not an invertible rational");
    Rational inv = Rational(1) / c_[0].constant_term();
    GSeries a = *this;
    for (auto& p : a.c_) p.scale(-inv);
    a.c_[0] = AuxPoly();
    GSeries r = a.inverse_of_one_minus();
    for (auto& p : r.c_) p.scale(inv);
    return r;
  }

  /// d/dt in the grading variable.
  GSeries derivative() const {
    GSeries r(std::max(order() - 1, 0), grading_);
    for (int n = 1; n <= order(); ++n) {
      AuxPoly p = c_[std::size_t(n)];
      r.c_[std::size_t(n - 1)] = p.scale(Rational(n));
    }
    return r;
  }

  /// d/dv for an auxiliary variable v, coefficientwise.
  GSeries derivative(const std::string& var) const {
    GSeries r(order(), grading_);
    for (int n = 0; n <= order(); ++n) {
      const AuxPoly& p = c_[std::size_t(n)];
      AuxPoly d;
      for (unsigned e = 1; e <= p.degree(var); ++e) d += p.coefficient(var, e) * AuxPoly::var(var, e - 1) * AuxPoly(Rational(e));
      r.c_[std::size_t(n)] = d;
    }
    return r;
  }

  GSeries substitute(const std::string& var, const AuxPoly& value) const {
    GSeries r(order(), grading_);
    for (int n = 0; n <= order(); ++n) r.c_[std::size_t(n)] = c_[std::size_t(n)].substitute(var, value);
    return r;
  }

  /// Drops the current grading and regrades by the exponent of `var`, keeping exponents
  /// up to `order`. The caller guarantees every term of those exponents is present.
  GSeries regrade(const std::string& var, int order) const {
    GSeries r(order, var);
    for (int n = 0; n <= this->order(); ++n) {
      const AuxPoly& p = c_[std::size_t(n)];
      if (p.is_zero()) continue;
      for (unsigned e = 0; e <= p.degree(var); ++e)
        if (int(e) <= order) r.c_[e] += p.coefficient(var, e);
    }
    return r;
  }

  /// Writes the series back as a single polynomial in `var` (grading variable expanded).
  AuxPoly to_poly(const std::string& var) const {
    AuxPoly s;
    for (int n = 0; n <= order(); ++n)
      if (!c_[std::size_t(n)].is_zero()) s += c_[std::size_t(n)] * AuxPoly::var(var, unsigned(n));
    return s;
  }

  std::string to_string() const {
    std::string out;
    for (int n = 0; n <= order(); ++n) {
      const AuxPoly& p = c_[std::size_t(n)];
      if (p.is_zero()) continue;
      if (!out.empty()) out += " + ";
      std::string t = grading_ == "faces" ? "t" : grading_;
      out += "(" + p.to_string() + ")";
      if (n > 0) out += "*" + t + (n > 1 ? "^" + std::to_string(n) : "");
    }
    return out.empty() ? "0" : out + " + O(" + (grading_ == "faces" ? "t" : grading_) + "^" + std::to_string(order() + 1) + ")";
  }

 private:
  std::vector<AuxPoly> c_;
  std::string grading_;
};

inline std::ostream& operator<<(std::ostream& os, const GSeries& s) { return os << s.to_string(); }

}  // namespace mobiles
