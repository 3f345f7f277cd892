#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "mobiles/gseries.hpp"

namespace mobiles {

enum class Extract { plus, minus, zero, strict_neg, strict_pos };

/// Laurent polynomial in z with GSeries coefficients, clipped to exponents in [lo, hi].
class ZLaurent {
 public:
  ZLaurent() = default;
  ZLaurent(int order, int lo, int hi, std::string grading = "faces")
      : order_(order), lo_(lo), hi_(hi), grading_(std::move(grading)) {}

  /// A single term c z^e.
  static ZLaurent term(const ZLaurent& shape, int e, const GSeries& c) {
    ZLaurent r = shape.empty_like();
    r.add(e, c);
    return r;
  }

  ZLaurent empty_like() const { return ZLaurent(order_, lo_, hi_, grading_); }

  int order() const { return order_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }
  const std::string& grading() const { return grading_; }
  const std::map<int, GSeries>& terms() const { return t_; }

  bool in_window(int e) const { return e >= lo_ && e <= hi_; }

  /// Adds c z^e; terms outside the window are dropped.
  void add(int e, const GSeries& c) {
    if (!in_window(e) || c.is_zero()) return;
    auto it = t_.find(e);
    if (it == t_.end()) t_.emplace(e, c.truncated(order_));
    else {
      it->second += c;
      if (it->second.is_zero()) t_.erase(it);
    }
  }

  GSeries coeff(int e) const {
    auto it = t_.find(e);
    if (it == t_.end()) return GSeries(order_, grading_);
    return it->second;
  }

  bool is_zero() const { return t_.empty(); }

  ZLaurent& operator+=(const ZLaurent& o) {
    for (const auto& [e, c] : o.t_) add(e, c);
    return *this;
  }

  ZLaurent& operator-=(const ZLaurent& o) {
    for (const auto& [e, c] : o.t_) add(e, -c);
    return *this;
  }

  ZLaurent operator-() const {
    ZLaurent r = empty_like();
    for (const auto& [e, c] : t_) r.t_.emplace(e, -c);
    return r;
  }

  friend ZLaurent operator+(ZLaurent a, const ZLaurent& b) { return a += b; }
  friend ZLaurent operator-(ZLaurent a, const ZLaurent& b) { return a -= b; }

  /// Multiplies by a z-independent series.
  ZLaurent scaled(const GSeries& s) const {
    ZLaurent r = empty_like();
    for (const auto& [e, c] : t_) r.add(e, c * s);
    return r;
  }

  /// Multiplies by z^k.
  ZLaurent shifted(int k) const {
    ZLaurent r = empty_like();
    for (const auto& [e, c] : t_) r.add(e + k, c);
    return r;
  }

  friend ZLaurent operator*(const ZLaurent& a, const ZLaurent& b) {
    ZLaurent r = a.empty_like();
    int N = std::min(a.order_, b.order_);
    r.order_ = N;
    // bucket raw products per (exponent, grade), normalize each bucket once
    std::map<int, std::vector<std::vector<AuxPoly::Term>>> buckets;
    for (const auto& [ea, ca] : a.t_) {
      for (const auto& [eb, cb] : b.t_) {
        int e = ea + eb;
        if (!r.in_window(e)) continue;
        auto& bucket = buckets[e];
        if (bucket.empty()) bucket.resize(std::size_t(N) + 1);
        for (int i = 0; i <= N; ++i) {
          const AuxPoly& x = ca[i];
          if (x.is_zero()) continue;
          for (int j = 0; i + j <= N; ++j) {
            const AuxPoly& y = cb[j];
            if (y.is_zero()) continue;
            AuxPoly::append_product(bucket[std::size_t(i + j)], x, y);
          }
        }
      }
    }
    for (auto& [e, bucket] : buckets) {
      GSeries s(N, a.grading_);
      for (int n = 0; n <= N; ++n) s[n] = AuxPoly::from_terms(std::move(bucket[std::size_t(n)]));
      if (!s.is_zero()) r.t_.emplace(e, std::move(s));
    }
    return r;
  }

  ZLaurent pow(unsigned k) const {
    ZLaurent result = term(*this, 0, GSeries::constant(order_, AuxPoly(1), grading_));
    if (k == 0) return result;
    ZLaurent acc = *this;
    for (unsigned i = 1; i < k; ++i) acc = acc * *this;
    return acc;
  }

  /// Projection onto a set of exponents.
  ZLaurent extract(Extract sel) const {
    ZLaurent r = empty_like();
    for (const auto& [e, c] : t_) {
      bool keep = false;
      switch (sel) {
        case Extract::plus: keep = e >= 0; break;
        case Extract::minus: keep = e <= 0; break;
        case Extract::zero: keep = e == 0; break;
        case Extract::strict_neg: keep = e < 0; break;
        case Extract::strict_pos: keep = e > 0; break;
      }
      if (keep) r.t_.emplace(e, c);
    }
    return r;
  }

  /// Maps z -> s/z for a z-independent series s: sum c_e z^e -> sum c_e s^e z^-e (e >= 0 only
  /// is representable when s is not invertible; negative e requires s invertible).
  ZLaurent reflected(const GSeries& s) const {
    ZLaurent r = empty_like();
    GSeries sinv;
    bool have_inv = false;
    for (const auto& [e, c] : t_) {
      GSeries f = GSeries::constant(order_, AuxPoly(1), grading_);
      if (e >= 0) f = s.pow(unsigned(e));
      else {
        if (!have_inv) { sinv = s.inverse(); have_inv = true; }
        f = sinv.pow(unsigned(-e));
      }
      r.add(-e, c * f);
    }
    return r;
  }

  ZLaurent truncated(int order) const {
    ZLaurent r(order, lo_, hi_, grading_);
    for (const auto& [e, c] : t_) r.add(e, c.truncated(order));
    return r;
  }

  ZLaurent with_window(int lo, int hi) const {
    ZLaurent r(order_, lo, hi, grading_);
    for (const auto& [e, c] : t_) r.add(e, c);
    return r;
  }

  friend bool operator==(const ZLaurent& a, const ZLaurent& b) { return a.t_ == b.t_; }
  friend bool operator!=(const ZLaurent& a, const ZLaurent& b) { return !(a == b); }

  std::string to_string() const {
    std::string out;
    for (const auto& [e, c] : t_) {
      if (!out.empty()) out += " + ";
      out += "[" + c.to_string() + "]*z^" + std::to_string(e);
    }
    return out.empty() ? "0" : out;
  }

 private:
  int order_ = 0;
  int lo_ = 0;
  int hi_ = 0;
  std::string grading_ = "faces";
  std::map<int, GSeries> t_;
};

}  // namespace mobiles
