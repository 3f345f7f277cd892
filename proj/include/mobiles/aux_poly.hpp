#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mobiles/errors.hpp"
#include "mobiles/rational.hpp"

namespace mobiles {

inline constexpr std::size_t max_variables = 24;

/// Process-wide table of auxiliary variable names. The common names are
/// registered up front so that term order is stable across runs.
class VariableRegistry {
 public:
  static VariableRegistry& instance() {
    static VariableRegistry reg;
    return reg;
  }

  std::size_t index(const std::string& name) {
    std::lock_guard<std::mutex> lock(mu_);
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    if (names_.size() == max_variables)
      fail(ErrorCode::cap_exceeded, "too many auxiliary variables (max 16), cannot add '" + name + "'");
    names_.push_back(name);
    return names_.size() - 1;
  }

  std::string name(std::size_t i) const {
    std::lock_guard<std::mutex> lock(mu_);
    return i < names_.size() ? names_[i] : "v" + std::to_string(i);
  }

 private:
  VariableRegistry() : names_{"g", "y", "z1", "z2", "z3", "z4", "alpha", "u", "x", "v4", "v6", "v8"} {}
  mutable std::mutex mu_;
  std::vector<std::string> names_;
};

inline std::size_t var_index(const std::string& name) { return VariableRegistry::instance().index(name); }

using Monomial = std::array<std::uint8_t, max_variables>;

inline Monomial monomial_product(const Monomial& a, const Monomial& b) {
  Monomial r{};
  for (std::size_t i = 0; i < max_variables; ++i) {
    unsigned s = unsigned(a[i]) + unsigned(b[i]);
    if (s > 255) fail(ErrorCode::cap_exceeded, "monomial exponent overflow");
    r[i] = std::uint8_t(s);
  }
  return r;
}

inline unsigned total_degree(const Monomial& m) {
  unsigned d = 0;
  for (auto e : m) d += e;
  return d;
}

/// Sparse multivariate polynomial with exact rational coefficients.
/// Terms are kept sorted by monomial with no zero coefficients.
class AuxPoly {
 public:
  using Term = std::pair<Monomial, Rational>;

  AuxPoly() = default;
  AuxPoly(long long c) { if (c != 0) terms_.push_back({Monomial{}, Rational(c)}); }
  AuxPoly(const Rational& c) { if (c != 0) terms_.push_back({Monomial{}, c}); }

  static AuxPoly var(const std::string& name, unsigned power = 1) {
    AuxPoly p;
    Monomial m{};
    if (power > 255) fail(ErrorCode::cap_exceeded, "monomial exponent overflow");
    m[var_index(name)] = std::uint8_t(power);
    p.terms_.push_back({m, Rational(1)});
    return p;
  }

  static AuxPoly monomial(const Monomial& m, const Rational& c) {
    AuxPoly p;
    if (c != 0) p.terms_.push_back({m, c});
    return p;
  }

  /// Builds from arbitrary (unsorted, possibly repeated) terms.
  static AuxPoly from_terms(std::vector<Term> terms) {
    AuxPoly p;
    p.terms_ = std::move(terms);
    p.normalize();
    return p;
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && total_degree(terms_[0].first) == 0); }

  Rational constant_term() const {
    if (!terms_.empty() && total_degree(terms_[0].first) == 0) return terms_[0].second;
    return 0;
  }

  AuxPoly& operator+=(const AuxPoly& o) {
    if (o.terms_.empty()) return *this;
    if (terms_.empty()) { terms_ = o.terms_; return *this; }
    std::vector<Term> out;
    out.reserve(terms_.size() + o.terms_.size());
    auto a = terms_.begin();
    auto b = o.terms_.begin();
    while (a != terms_.end() || b != o.terms_.end()) {
      if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first)) {
        out.push_back(std::move(*a++));
      } else if (a == terms_.end() || b->first < a->first) {
        out.push_back(*b++);
      } else {
        Rational s = a->second + b->second;
        if (s != 0) out.push_back({a->first, std::move(s)});
        ++a, ++b;
      }
    }
    terms_ = std::move(out);
    return *this;
  }

  AuxPoly operator-() const {
    AuxPoly r = *this;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
  }

  AuxPoly& operator-=(const AuxPoly& o) { return *this += -o; }

  AuxPoly& scale(const Rational& c) {
    if (c == 0) { terms_.clear(); return *this; }
    for (auto& t : terms_) t.second *= c;
    return *this;
  }

  /// Accumulates a*b into this polynomial.
  void add_product(const AuxPoly& a, const AuxPoly& b) {
    if (a.is_zero() || b.is_zero()) return;
    *this += a * b;
  }

  friend AuxPoly operator*(const AuxPoly& a, const AuxPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.is_constant()) { AuxPoly r = b; r.scale(a.terms_[0].second); return r; }
    if (b.is_constant()) { AuxPoly r = a; r.scale(b.terms_[0].second); return r; }
    std::vector<Term> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& x : a.terms_)
      for (const auto& y : b.terms_) out.push_back({monomial_product(x.first, y.first), x.second * y.second});
    AuxPoly r;
    r.terms_ = std::move(out);
    r.normalize();
    return r;
  }

  AuxPoly& operator*=(const AuxPoly& o) { *this = *this * o; return *this; }

  /// Appends the unnormalized terms of a*b; pair with from_terms to batch many products.
  static void append_product(std::vector<Term>& out, const AuxPoly& a, const AuxPoly& b) {
    for (const auto& x : a.terms_)
      for (const auto& y : b.terms_) out.push_back({monomial_product(x.first, y.first), x.second * y.second});
  }

  static void append(std::vector<Term>& out, const AuxPoly& a) { out.insert(out.end(), a.terms_.begin(), a.terms_.end()); }

  friend AuxPoly operator+(AuxPoly a, const AuxPoly& b) { return a += b; }
  friend AuxPoly operator-(AuxPoly a, const AuxPoly& b) { return a -= b; }

  friend bool operator==(const AuxPoly& a, const AuxPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const AuxPoly& a, const AuxPoly& b) { return !(a == b); }

  AuxPoly pow(unsigned k) const {
    AuxPoly result(1), base = *this;
    while (k) {
      if (k & 1) result *= base;
      k >>= 1;
      if (k) base *= base;
    }
    return result;
  }

  unsigned degree(const std::string& name) const {
    auto i = var_index(name);
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max<unsigned>(d, t.first[i]);
    return d;
  }

  /// Coefficient of name^e, as a polynomial in the remaining variables.
  AuxPoly coefficient(const std::string& name, unsigned e) const {
    auto i = var_index(name);
    std::vector<Term> out;
    for (const auto& t : terms_)
      if (t.first[i] == e) {
        Monomial m = t.first;
        m[i] = 0;
        out.push_back({m, t.second});
      }
    return from_terms(std::move(out));
  }

  /// Replaces variable `name` by the polynomial `value`.
  AuxPoly substitute(const std::string& name, const AuxPoly& value) const {
    auto i = var_index(name);
    std::map<unsigned, AuxPoly> powers;
    AuxPoly result;
    std::vector<Term> untouched;
    for (const auto& t : terms_) {
      if (t.first[i] == 0) { untouched.push_back(t); continue; }
      unsigned e = t.first[i];
      auto it = powers.find(e);
      if (it == powers.end()) it = powers.emplace(e, value.pow(e)).first;
      Monomial rest = t.first;
      rest[i] = 0;
      result += monomial(rest, t.second) * it->second;
    }
    result += from_terms(std::move(untouched));
    return result;
  }

  /// Multiplies every term by scale^(exponent of name); used for rescaling a grading variable.
  AuxPoly scale_variable(const std::string& name, const Rational& factor) const {
    auto i = var_index(name);
    AuxPoly r = *this;
    for (auto& t : r.terms_) {
      Rational f = 1;
      for (unsigned k = 0; k < t.first[i]; ++k) f *= factor;
      t.second *= f;
    }
    r.normalize();
    return r;
  }

  /// Evaluates with every variable set to a rational value; missing variables count as 0.
  Rational evaluate(const std::map<std::string, Rational>& values) const {
    std::array<Rational, max_variables> v{};
    for (const auto& [n, x] : values) v[var_index(n)] = x;
    Rational s = 0;
    for (const auto& t : terms_) {
      Rational p = t.second;
      for (std::size_t i = 0; i < max_variables; ++i)
        for (unsigned k = 0; k < t.first[i]; ++k) p *= v[i];
      s += p;
    }
    return s;
  }

  std::string to_string() const;

 private:
  void normalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!out.empty() && out.back().first == t.first) out.back().second += t.second;
      else out.push_back(std::move(t));
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const Term& t) { return t.second == 0; }), out.end());
    terms_ = std::move(out);
  }

  std::vector<Term> terms_;
};

inline std::string monomial_to_string(const Monomial& m) {
  std::string s;
  auto& reg = VariableRegistry::instance();
  for (std::size_t i = 0; i < max_variables; ++i) {
    if (!m[i]) continue;
    if (!s.empty()) s += '*';
    s += reg.name(i);
    if (m[i] > 1) s += '^' + std::to_string(m[i]);
  }
  return s;
}

// Ascending total degree, ties broken by monomial order, so "2+8*z1+5*z1^2".
inline std::string AuxPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<const Term*> order;
  for (const auto& t : terms_) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(), [](const Term* a, const Term* b) {
    auto da = total_degree(a->first), db = total_degree(b->first);
    if (da != db) return da < db;
    return a->first > b->first;
  });
  std::string out;
  for (const Term* t : order) {
    std::string mono = monomial_to_string(t->first);
    Rational c = t->second;
    bool neg = c < 0;
    if (neg) c = -c;
    if (out.empty()) out += neg ? "-" : "";
    else out += neg ? "-" : "+";
    if (mono.empty()) out += mobiles::to_string(c);
    else if (c == 1) out += mono;
    else out += mobiles::to_string(c) + "*" + mono;
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const AuxPoly& p) { return os << p.to_string(); }

namespace detail {

class PolyParser {
 public:
  explicit PolyParser(const std::string& s) : s_(s) {}

  AuxPoly parse() {
    AuxPoly p = expr();
    skip();
    if (pos_ != s_.size()) error("unexpected character");
    return p;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::invalid_input, "cannot parse polynomial '" + s_ + "' at " + std::to_string(pos_) + ": " + what);
  }
  void skip() { while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_; }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
    return false;
  }

  AuxPoly expr() {
    AuxPoly acc;
    bool first = true;
    for (;;) {
      bool neg = false;
      if (eat('-')) neg = true;
      else if (!first && !eat('+')) break;
      else if (first) eat('+');
      AuxPoly t = term();
      acc += neg ? -t : t;
      first = false;
    }
    return acc;
  }

  AuxPoly term() {
    AuxPoly acc = power();
    for (;;) {
      if (eat('*')) acc *= power();
      else if (eat('/')) {
        AuxPoly d = power();
        if (!d.is_constant() || d.is_zero()) error("division only by nonzero constants");
        acc.scale(Rational(1) / d.constant_term());
      } else break;
    }
    return acc;
  }

  AuxPoly power() {
    AuxPoly base = atom();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) error("expected exponent");
      base = base.pow(unsigned(std::stoul(s_.substr(start, pos_ - start))));
    }
    return base;
  }

  AuxPoly atom() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      AuxPoly p = expr();
      if (!eat(')')) error("expected ')'");
      return p;
    }
    if (c == '-') { ++pos_; return -atom(); }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return AuxPoly(Rational(Integer(s_.substr(start, pos_ - start))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      return AuxPoly::var(s_.substr(start, pos_ - start));
    }
    error("unexpected character");
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses expressions such as "3/2*y^2 + z1" or "g*(1+y)^2".
inline AuxPoly parse_poly(const std::string& text) { return detail::PolyParser(text).parse(); }

}  // namespace mobiles
