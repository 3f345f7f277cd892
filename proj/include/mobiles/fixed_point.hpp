#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mobiles/zlaurent.hpp"

namespace mobiles {

/// Values visible to right-hand sides during one sweep, all truncated at `order`.
struct Env {
  int order = 0;
  int lo = 0;
  int hi = 0;
  std::string grading = "faces";
  std::map<std::string, GSeries> series;
  std::map<std::string, ZLaurent> laurent;

  const GSeries& s(const std::string& name) const {
    auto it = series.find(name);
    if (it == series.end()) fail(ErrorCode::internal, "unknown series '" + name + "'");
    return it->second;
  }
  const ZLaurent& l(const std::string& name) const {
    auto it = laurent.find(name);
    if (it == laurent.end()) fail(ErrorCode::internal, "unknown Laurent unknown '" + name + "'");
    return it->second;
  }

  GSeries zero() const { return GSeries(order, grading); }
  GSeries constant(const AuxPoly& c) const { return GSeries::constant(order, c, grading); }
  GSeries mono(int degree, const AuxPoly& c) const { return GSeries::monomial(order, degree, c, grading); }
  ZLaurent zero_laurent() const { return ZLaurent(order, lo, hi, grading); }
  ZLaurent z_power(int e, const GSeries& c) const { return ZLaurent::term(zero_laurent(), e, c); }
};

/// An edge of the dependency graph: the right-hand side reads `name`, and every term
/// using it carries at least `increment` units of grading.
struct Dependency {
  std::string name;
  int increment = 1;
};

struct Equation {
  std::string name;
  bool is_laurent = false;
  std::vector<Dependency> deps;
  std::function<GSeries(const Env&)> series_rhs;
  std::function<ZLaurent(const Env&)> laurent_rhs;
};

struct Solution {
  int order = 0;
  int lo = 0;
  int hi = 0;
  int sweeps = 0;
  std::string grading = "faces";
  std::map<std::string, GSeries> series;
  std::map<std::string, ZLaurent> laurent;

  const GSeries& s(const std::string& name) const { return series.at(name); }
  const ZLaurent& l(const std::string& name) const { return laurent.at(name); }

  Env env() const {
    Env e;
    e.order = order, e.lo = lo, e.hi = hi, e.grading = grading;
    e.series = series;
    e.laurent = laurent;
    return e;
  }
};

namespace detail {

inline int first_difference(const GSeries& a, const GSeries& b) {
  int n = std::min(a.order(), b.order());
  for (int i = 0; i <= n; ++i)
    if (a[i] != b[i]) return i;
  return -1;
}

inline int first_difference(const ZLaurent& a, const ZLaurent& b, int order) {
  int best = -1;
  auto upd = [&](int d) { if (d >= 0 && (best < 0 || d < best)) best = d; };
  for (const auto& [e, c] : a.terms()) upd(first_difference(c.truncated(order), b.coeff(e).truncated(order)));
  for (const auto& [e, c] : b.terms()) upd(first_difference(c.truncated(order), a.coeff(e).truncated(order)));
  return best;
}

}  // namespace detail

/// Gauss-Seidel solver for a system of series and Laurent unknowns. Sweep s works at
/// truncation min(N, s-1); once a sweep at order N changes nothing the solution is returned.
class FixedPointSystem {
 public:
  explicit FixedPointSystem(std::string grading = "faces") : grading_(std::move(grading)) {}

  void set_window(int lo, int hi) { lo_ = lo, hi_ = hi; }
  int window_lo() const { return lo_; }
  int window_hi() const { return hi_; }
  const std::string& grading() const { return grading_; }

  void add_series(const std::string& name, std::vector<Dependency> deps, std::function<GSeries(const Env&)> rhs) {
    Equation e;
    e.name = name, e.deps = std::move(deps), e.series_rhs = std::move(rhs);
    eqs_.push_back(std::move(e));
  }

  void add_laurent(const std::string& name, std::vector<Dependency> deps, std::function<ZLaurent(const Env&)> rhs) {
    Equation e;
    e.name = name, e.is_laurent = true, e.deps = std::move(deps), e.laurent_rhs = std::move(rhs);
    eqs_.push_back(std::move(e));
  }

  const std::vector<Equation>& equations() const { return eqs_; }

  /// Equation indices ordered so zero-increment dependencies come first.
  /// Throws NotContractive when they form a cycle.
  std::vector<std::size_t> schedule() const {
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < eqs_.size(); ++i) idx[eqs_[i].name] = i;
    std::vector<std::vector<std::size_t>> out(eqs_.size());
    std::vector<int> indeg(eqs_.size(), 0);
    for (std::size_t i = 0; i < eqs_.size(); ++i)
      for (const auto& d : eqs_[i].deps) {
        auto it = idx.find(d.name);
        if (it == idx.end()) fail(ErrorCode::invalid_input, "equation '" + eqs_[i].name + "' reads undeclared '" + d.name + "'");
        if (d.increment < 0) fail(ErrorCode::not_contractive, "negative grading increment on " + d.name);
        if (d.increment == 0) {
          if (it->second == i) fail(ErrorCode::not_contractive, "'" + d.name + "' depends on itself with zero increment");
          out[it->second].push_back(i);
          ++indeg[i];
        }
      }
    std::vector<std::size_t> order;
    std::vector<bool> done(eqs_.size(), false);
    while (order.size() < eqs_.size()) {
      bool progressed = false;
      for (std::size_t i = 0; i < eqs_.size(); ++i) {
        if (done[i] || indeg[i] != 0) continue;
        done[i] = true;
        order.push_back(i);
        for (auto j : out[i]) --indeg[j];
        progressed = true;
        break;
      }
      if (!progressed) {
        std::string names;
        for (std::size_t i = 0; i < eqs_.size(); ++i)
          if (!done[i]) names += " " + eqs_[i].name;
        fail(ErrorCode::not_contractive, "zero-increment dependency cycle among:" + names);
      }
    }
    return order;
  }

  Solution solve(int N) const {
    if (N < 0) fail(ErrorCode::invalid_input, "negative order");
    auto sched = schedule();
    Solution sol;
    sol.order = N, sol.lo = lo_, sol.hi = hi_, sol.grading = grading_;
    for (const auto& e : eqs_) {
      if (e.is_laurent) sol.laurent[e.name] = ZLaurent(N, lo_, hi_, grading_);
      else sol.series[e.name] = GSeries(N, grading_);
    }
    for (int sweep = 1;; ++sweep) {
      if (sweep > N + 2) fail(ErrorCode::no_convergence, "no fixed point after " + std::to_string(N + 2) + " sweeps");
      int w = std::min(N, sweep - 1);
      Env env;
      env.order = w, env.lo = lo_, env.hi = hi_, env.grading = grading_;
      for (const auto& [n, v] : sol.series) env.series[n] = v.truncated(w);
      for (const auto& [n, v] : sol.laurent) env.laurent[n] = v.truncated(w);
      bool changed = false;
      for (auto i : sched) {
        const auto& eq = eqs_[i];
        if (eq.is_laurent) {
          ZLaurent v = eq.laurent_rhs(env).truncated(w).with_window(lo_, hi_);
          int d = detail::first_difference(v, env.laurent[eq.name], w);
          if (d >= 0) {
            changed = true;
            if (d < w) fail(ErrorCode::not_contractive, "'" + eq.name + "' changed at grading " + std::to_string(d) + " during sweep " + std::to_string(sweep));
          }
          env.laurent[eq.name] = v;
          sol.laurent[eq.name] = v.truncated(N);
        } else {
          GSeries v = eq.series_rhs(env).truncated(w);
          int d = detail::first_difference(v, env.series[eq.name]);
          if (d >= 0) {
            changed = true;
            if (d < w) fail(ErrorCode::not_contractive, "'" + eq.name + "' changed at grading " + std::to_string(d) + " during sweep " + std::to_string(sweep));
          }
          env.series[eq.name] = v;
          sol.series[eq.name] = v.truncated(N);
        }
      }
      sol.sweeps = sweep;
      if (w == N && !changed) break;
    }
    return sol;
  }

  /// Plugs the solution into every equation; returns the names whose residual is nonzero.
  std::vector<std::string> residuals(const Solution& sol) const {
    Env env = sol.env();
    std::vector<std::string> bad;
    for (const auto& eq : eqs_) {
      if (eq.is_laurent) {
        if (eq.laurent_rhs(env).truncated(sol.order).with_window(lo_, hi_) != sol.l(eq.name)) bad.push_back(eq.name);
      } else if (eq.series_rhs(env).truncated(sol.order) != sol.s(eq.name)) {
        bad.push_back(eq.name);
      }
    }
    return bad;
  }

 private:
  std::string grading_;
  int lo_ = -1;
  int hi_ = 1;
  std::vector<Equation> eqs_;
};

/// True when widening the window by `extra` on both sides changes nothing.
inline bool window_sound(const FixedPointSystem& sys, const Solution& sol, int extra = 2) {
  FixedPointSystem wide = sys;
  wide.set_window(sys.window_lo() - extra, sys.window_hi() + extra);
  Solution w = wide.solve(sol.order);
  for (const auto& [n, v] : sol.series)
    if (w.s(n) != v) return false;
  for (const auto& [n, v] : sol.laurent)
    if (w.l(n).terms() != v.terms()) return false;
  return true;
}

}  // namespace mobiles
