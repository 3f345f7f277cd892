#pragma once

#include <functional>
#include <map>
#include <memory>
#include <random>
#include <vector>

#include "mobiles/mobile.hpp"
#include "mobiles/model_spec.hpp"

namespace mobiles {

/// Plane subtree of an unrestricted mobile, hanging from its parent edge. Children are listed
/// clockwise after the parent edge. For flagged child edges `delta` is the flag on the white
/// side's exit minus the one on its entry.
struct MobilePart {
  struct Child {
    std::shared_ptr<const MobilePart> part;
    int delta = 0;
    bool marked = false;
  };
  NodeKind kind = NodeKind::labeled;
  int valence = 0;  // white: face degree; black: effective valence
  int charge = 0;
  std::vector<Child> children;
  std::vector<int> eps;  // black: label increments at corners, eps[0] right after the parent edge
};

using PartPtr = std::shared_ptr<const MobilePart>;

/// Node type of the grammar: one face class with its weight split by size increment.
template <class V>
struct GrammarClass {
  int valence = 0;
  int charge = 0;
  std::vector<std::pair<int, V>> parts;
};

/// Counts of planted mobile pieces by size and flag balance. Labeled vertices carry sequences of
/// white pieces; a white node of valence k has k-1 slots, each a labeled vertex (label drops by
/// one) or a black piece (flag rises by delta); a black node of effective valence k with m
/// flagged edges spreads k-m label increments over its m corners.
template <class V>
class MobileGrammar {
 public:
  using Row = std::map<int, V>;
  using Table = std::vector<Row>;

  MobileGrammar(std::vector<GrammarClass<V>> whites, std::vector<GrammarClass<V>> blacks, V y, BlockMode mode, int p,
                std::function<bool(int, int)> allowed, int max_size)
      : whites_(std::move(whites)), blacks_(std::move(blacks)), y_(std::move(y)), mode_(mode), p_(p),
        allowed_(std::move(allowed)), N_(max_size) {
    if (N_ < 0) fail(ErrorCode::invalid_input, "size must be non-negative");
    for (const auto& c : whites_)
      for (const auto& [d, w] : c.parts)
        if (d < 1) fail(ErrorCode::invalid_input, "every white face must add to the size");
    build();
  }

  int max_size() const { return N_; }
  /// Weighted count of rooted unrestricted mobiles of the given size.
  const V& count(int n) const { return LP_[std::size_t(n)]; }

  const std::vector<GrammarClass<V>>& whites() const { return whites_; }
  const std::vector<GrammarClass<V>>& blacks() const { return blacks_; }

  // tables read by the decomposition
  std::vector<V> LP_, WL_;
  std::vector<Table> WF_;                       // white charge -> size -> delta
  std::map<std::pair<int, int>, Table> BP_;     // (black charge, parent white charge) -> size -> delta
  std::vector<Table> S_;                        // white charge -> slot
  std::vector<std::vector<Table>> P_;           // white charge -> slots used -> size -> balance
  std::vector<Table> C_;                        // black charge -> one child edge
  std::vector<std::vector<Table>> CP_;          // black charge -> children -> size -> sum of deltas
  std::vector<GrammarClass<V>> whites_, blacks_;
  V y_;
  BlockMode mode_;
  int p_;
  std::function<bool(int, int)> allowed_;
  int N_;
  int max_white_ = 1, max_black_ = 1;

 private:
  static void add_to(Row& r, int key, const V& v) {
    if (v == V(0)) return;
    auto [it, fresh] = r.emplace(key, v);
    if (!fresh) {
      it->second += v;
      if (it->second == V(0)) r.erase(it);
    }
  }

  void build() {
    std::size_t sz = std::size_t(N_ + 1);
    for (const auto& c : whites_) max_white_ = std::max(max_white_, c.valence);
    for (const auto& c : blacks_) max_black_ = std::max(max_black_, c.valence);
    int charges = p_ + 1;
    LP_.assign(sz, V(0));
    WL_.assign(sz, V(0));
    WF_.assign(std::size_t(charges), Table(sz));
    S_.assign(std::size_t(charges), Table(sz));
    P_.assign(std::size_t(charges), std::vector<Table>(std::size_t(max_white_), Table(sz)));
    C_.assign(std::size_t(charges), Table(sz));
    CP_.assign(std::size_t(charges), std::vector<Table>(std::size_t(max_black_), Table(sz)));
    for (int j = 0; j < charges; ++j)
      for (int i = 0; i < charges; ++i) BP_[{j, i}] = Table(sz);
    for (int i = 0; i < charges; ++i) P_[std::size_t(i)][0][0][0] = V(1);
    for (int j = 0; j < charges; ++j) CP_[std::size_t(j)][0][0][0] = V(1);

    for (int n = 0; n <= N_; ++n) {
      std::size_t un = std::size_t(n);
      for (const auto& c : whites_)
        for (const auto& [d, w] : c.parts) {
          if (d > n) continue;
          const Row& prod = P_[std::size_t(c.charge)][std::size_t(c.valence - 1)][std::size_t(n - d)];
          for (const auto& [b, v] : prod) {
            if (b == 1) WL_[un] += w * v;
            add_to(WF_[std::size_t(c.charge)][un], -b, w * v);
          }
        }
      for (int j = 0; j < charges; ++j) {
        for (int i = 0; i < charges; ++i)
          for (const auto& [delta, v] : WF_[std::size_t(i)][un]) {
            if (delta >= 0) add_to(C_[std::size_t(j)][un], delta, v);
            if (mode_ == BlockMode::directed && allowed_(i, j)) add_to(C_[std::size_t(j)][un], delta, y_ * v);
          }
        for (int r = 1; r < max_black_; ++r)
          for (int n1 = 0; n1 < n; ++n1)
            for (const auto& [s1, v1] : CP_[std::size_t(j)][std::size_t(r - 1)][std::size_t(n1)])
              for (const auto& [s2, v2] : C_[std::size_t(j)][std::size_t(n - n1)])
                add_to(CP_[std::size_t(j)][std::size_t(r)][un], s1 + s2, v1 * v2);
      }
      for (const auto& c : blacks_)
        for (const auto& [d, w] : c.parts) {
          if (d > n) continue;
          std::size_t rest = std::size_t(n - d);
          for (int i = 0; i < charges; ++i) {
            Row& out = BP_[{c.charge, i}][un];
            bool mark_parent = mode_ == BlockMode::directed && allowed_(i, c.charge);
            for (int m = 1; m <= c.valence; ++m) {
              V mult = V(Rational(binomial(unsigned(c.valence - 1), unsigned(m - 1)))) * w;
              for (const auto& [s, v] : CP_[std::size_t(c.charge)][std::size_t(m - 1)][rest]) {
                int dp = c.valence - m - s;
                if (dp >= 0) add_to(out, dp, mult * v);
                if (mark_parent) add_to(out, dp, mult * v * y_);
              }
            }
            if (mode_ == BlockMode::pairs && c.valence == 2)
              for (int ic = 0; ic < charges; ++ic)
                for (const auto& [dc, v] : WF_[std::size_t(ic)][rest]) add_to(out, -dc, w * y_ * v);
          }
        }
      LP_[un] = n == 0 ? V(1) : V(0);
      for (int m = 1; m <= n; ++m) LP_[un] += WL_[std::size_t(m)] * LP_[std::size_t(n - m)];
      for (int i = 0; i < charges; ++i) {
        add_to(S_[std::size_t(i)][un], -1, LP_[un]);
        for (int j = 0; j < charges; ++j)
          for (const auto& [delta, v] : BP_[{j, i}][un]) add_to(S_[std::size_t(i)][un], delta, v);
        for (int r = 1; r < max_white_; ++r)
          for (int n1 = 0; n1 <= n; ++n1)
            for (const auto& [b1, v1] : P_[std::size_t(i)][std::size_t(r - 1)][std::size_t(n1)])
              for (const auto& [b2, v2] : S_[std::size_t(i)][std::size_t(n - n1)])
                add_to(P_[std::size_t(i)][std::size_t(r)][un], b1 + b2, v1 * v2);
      }
    }
  }
};

/// Grammar classes of a model: sizes from the grading, weights evaluated by `value`.
template <class V>
std::vector<GrammarClass<V>> grammar_classes(const ModelSpec& spec, Color side, const Grading& gr, int order,
                                             const std::function<V(const AuxPoly&)>& value) {
  std::vector<GrammarClass<V>> out;
  for (const auto& c : spec.classes(side)) {
    GrammarClass<V> g{c.valence, c.charge, {}};
    GSeries w = gr.weight(c.weight, order);
    for (int d = 0; d <= order; ++d)
      if (!w[d].is_zero()) g.parts.push_back({d, value(w[d])});
    out.push_back(std::move(g));
  }
  return out;
}

template <class V>
MobileGrammar<V> model_grammar(const ModelSpec& spec, const Grading& gr, int order, const std::function<V(const AuxPoly&)>& value) {
  spec.validate();
  return MobileGrammar<V>(grammar_classes<V>(spec, Color::white, gr, order, value), grammar_classes<V>(spec, Color::black, gr, order, value),
                          value(spec.y), spec.mode, spec.p, [spec](int i, int j) { return spec.marking_allowed(i, j); }, order);
}

/// R read off the mobile grammar with symbolic weights, faces grading.
inline GSeries mobile_series(const ModelSpec& spec, int order) {
  auto g = model_grammar<AuxPoly>(spec, Grading("faces"), order, [](const AuxPoly& p) { return p; });
  GSeries r(order, "faces");
  for (int n = 0; n <= order; ++n) r[n] = g.count(n);
  return r;
}

/// Picks one option among weighted alternatives.
class Chooser {
 public:
  virtual ~Chooser() = default;
  virtual std::size_t choose(const std::vector<long double>& weights) = 0;
};

class RandomChooser : public Chooser {
 public:
  explicit RandomChooser(std::uint64_t seed) : rng_(seed) {}
  std::size_t choose(const std::vector<long double>& w) override {
    long double total = 0;
    for (auto x : w) total += x;
    if (!(total > 0)) fail(ErrorCode::internal, "no option with positive weight");
    long double u = std::uniform_real_distribution<long double>(0, total)(rng_);
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] <= 0) continue;
      if (u < w[i]) return i;
      u -= w[i];
    }
    for (std::size_t i = w.size(); i-- > 0;)
      if (w[i] > 0) return i;
    return 0;
  }

 private:
  std::mt19937_64 rng_;
};

/// Walks every sequence of choices with positive weight, one sequence per run.
class ExhaustiveChooser : public Chooser {
 public:
  std::size_t choose(const std::vector<long double>& w) override {
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i] > 0) live.push_back(i);
    if (live.empty()) fail(ErrorCode::internal, "no option with positive weight");
    if (pos_ == path_.size()) {
      path_.push_back(0);
      width_.push_back(live.size());
    }
    return live[path_[pos_++]];
  }
  /// Moves to the next sequence; false when all were visited.
  bool advance() {
    path_.resize(pos_);
    width_.resize(pos_);
    pos_ = 0;
    while (!path_.empty() && path_.back() + 1 >= width_.back()) {
      path_.pop_back();
      width_.pop_back();
    }
    if (path_.empty()) return false;
    ++path_.back();
    return true;
  }

 private:
  std::vector<std::size_t> path_, width_;
  std::size_t pos_ = 0;
};

namespace detail {

inline long double as_ld(const Rational& r) { return r.convert_to<long double>(); }

/// Replays the grammar's decomposition, asking `ch` at every branching.
class Decomposer {
 public:
  using G = MobileGrammar<Rational>;
  Decomposer(const G& g, Chooser& ch) : g_(g), ch_(ch) {}

  PartPtr labeled(int n) {
    auto part = std::make_shared<MobilePart>();
    part->kind = NodeKind::labeled;
    while (n > 0) {
      std::vector<long double> w;
      for (int m = 1; m <= n; ++m) w.push_back(as_ld(g_.WL_[std::size_t(m)] * g_.LP_[std::size_t(n - m)]));
      int m = int(ch_.choose(w)) + 1;
      part->children.push_back({white_from_labeled(m), 0, false});
      n -= m;
    }
    return part;
  }

 private:
  const G& g_;
  Chooser& ch_;

  static Rational at(const G::Row& r, int key) {
    auto it = r.find(key);
    return it == r.end() ? Rational(0) : it->second;
  }

  PartPtr white_from_labeled(int n) { return white(n, 1, -1); }

  /// White node of size n whose slots must balance to `balance`; charge -1 means any.
  PartPtr white(int n, int balance, int charge) {
    std::vector<long double> w;
    std::vector<std::pair<std::size_t, std::size_t>> opt;
    for (std::size_t c = 0; c < g_.whites_.size(); ++c) {
      const auto& cl = g_.whites_[c];
      if (charge >= 0 && cl.charge != charge) continue;
      for (std::size_t k = 0; k < cl.parts.size(); ++k) {
        auto [d, wt] = cl.parts[k];
        if (d > n) continue;
        w.push_back(as_ld(wt * at(g_.P_[std::size_t(cl.charge)][std::size_t(cl.valence - 1)][std::size_t(n - d)], balance)));
        opt.push_back({c, k});
      }
    }
    auto [c, k] = opt[ch_.choose(w)];
    const auto& cl = g_.whites_[c];
    auto part = std::make_shared<MobilePart>();
    part->kind = NodeKind::white;
    part->valence = cl.valence;
    part->charge = cl.charge;
    slots(*part, cl.charge, cl.valence - 1, n - cl.parts[k].first, balance);
    return part;
  }

  void slots(MobilePart& part, int i, int r, int n, int b) {
    if (r == 0) return;
    // choose the last slot's size and balance
    std::vector<long double> w;
    std::vector<std::pair<int, int>> opt;
    for (int n2 = 0; n2 <= n; ++n2)
      for (const auto& [b2, v2] : g_.S_[std::size_t(i)][std::size_t(n2)]) {
        Rational v1 = at(g_.P_[std::size_t(i)][std::size_t(r - 1)][std::size_t(n - n2)], b - b2);
        if (v1 == 0) continue;
        w.push_back(as_ld(v1 * v2));
        opt.push_back({n2, b2});
      }
    auto [n2, b2] = opt[ch_.choose(w)];
    slots(part, i, r - 1, n - n2, b - b2);
    // the slot itself: a labeled vertex or a black piece from some black charge
    std::vector<long double> sw;
    sw.push_back(b2 == -1 ? as_ld(g_.LP_[std::size_t(n2)]) : 0.0L);
    for (int j = 0; j <= g_.p_; ++j) sw.push_back(as_ld(at(g_.BP_.at({j, i})[std::size_t(n2)], b2)));
    std::size_t s = ch_.choose(sw);
    if (s == 0) {
      part.children.push_back({labeled(n2), 0, false});
      return;
    }
    bool parent_marked = false;
    PartPtr bp = black(n2, b2, int(s) - 1, i, parent_marked);
    part.children.push_back({bp, b2, parent_marked});
  }

  PartPtr black(int n, int dp, int j, int i, bool& parent_marked) {
    // options: (class, size part, m) in the standard route, or the pairs-mode marked digon
    struct Opt {
      std::size_t cls, k;
      int m;
      bool pair_marked;
    };
    std::vector<long double> w;
    std::vector<Opt> opt;
    bool mark_parent = g_.mode_ == BlockMode::directed && g_.allowed_(i, j);
    for (std::size_t c = 0; c < g_.blacks_.size(); ++c) {
      const auto& cl = g_.blacks_[c];
      if (cl.charge != j) continue;
      for (std::size_t k = 0; k < cl.parts.size(); ++k) {
        auto [d, wt] = cl.parts[k];
        if (d > n) continue;
        for (int m = 1; m <= cl.valence; ++m) {
          Rational v = at(g_.CP_[std::size_t(j)][std::size_t(m - 1)][std::size_t(n - d)], cl.valence - m - dp);
          Rational f = (dp >= 0 ? Rational(1) : Rational(0)) + (mark_parent ? g_.y_ : Rational(0));
          w.push_back(as_ld(wt * Rational(binomial(unsigned(cl.valence - 1), unsigned(m - 1))) * v * f));
          opt.push_back({c, k, m, false});
        }
        if (g_.mode_ == BlockMode::pairs && cl.valence == 2) {
          Rational v = 0;
          for (int ic = 0; ic <= g_.p_; ++ic) v += at(g_.WF_[std::size_t(ic)][std::size_t(n - d)], -dp);
          w.push_back(as_ld(wt * g_.y_ * v));
          opt.push_back({c, k, 2, true});
        }
      }
    }
    Opt o = opt[ch_.choose(w)];
    const auto& cl = g_.blacks_[o.cls];
    int rest = n - cl.parts[o.k].first;
    auto part = std::make_shared<MobilePart>();
    part->kind = NodeKind::black;
    part->valence = cl.valence;
    part->charge = j;
    if (o.pair_marked) {
      parent_marked = true;
      std::vector<long double> cw;
      for (int ic = 0; ic <= g_.p_; ++ic) cw.push_back(as_ld(at(g_.WF_[std::size_t(ic)][std::size_t(rest)], -dp)));
      int ic = int(ch_.choose(cw));
      part->children.push_back({white(rest, dp, ic), -dp, true});
      part->eps = {0, 0};
      return part;
    }
    if (dp < 0) {
      parent_marked = true;
    } else if (mark_parent) {
      parent_marked = ch_.choose({1.0L, as_ld(g_.y_)}) == 1;
    }
    children(*part, j, o.m - 1, rest, cl.valence - o.m - dp);
    // corner increments: a uniform composition of valence - m into m parts
    int total = cl.valence - o.m;
    part->eps.assign(std::size_t(o.m), 0);
    for (int c = 0; c < o.m - 1; ++c) {
      std::vector<long double> cw;
      for (int e = 0; e <= total; ++e)
        cw.push_back(as_ld(Rational(binomial(unsigned(total - e + o.m - c - 2), unsigned(o.m - c - 2)))));
      int e = int(ch_.choose(cw));
      part->eps[std::size_t(c)] = e;
      total -= e;
    }
    part->eps.back() = total;
    return part;
  }

  void children(MobilePart& part, int j, int r, int n, int s) {
    if (r == 0) return;
    std::vector<long double> w;
    std::vector<std::pair<int, int>> opt;
    for (int n2 = 1; n2 <= n; ++n2)
      for (const auto& [s2, v2] : g_.C_[std::size_t(j)][std::size_t(n2)]) {
        Rational v1 = at(g_.CP_[std::size_t(j)][std::size_t(r - 1)][std::size_t(n - n2)], s - s2);
        if (v1 == 0) continue;
        w.push_back(as_ld(v1 * v2));
        opt.push_back({n2, s2});
      }
    auto [n2, s2] = opt[ch_.choose(w)];
    children(part, j, r - 1, n - n2, s - s2);
    // child charge and mark
    std::vector<long double> cw;
    std::vector<std::pair<int, bool>> copt;
    for (int ic = 0; ic <= g_.p_; ++ic) {
      Rational v = at(g_.WF_[std::size_t(ic)][std::size_t(n2)], s2);
      if (s2 >= 0) {
        cw.push_back(as_ld(v));
        copt.push_back({ic, false});
      }
      if (g_.mode_ == BlockMode::directed && g_.allowed_(ic, j)) {
        cw.push_back(as_ld(v * g_.y_));
        copt.push_back({ic, true});
      }
    }
    auto [ic, marked] = copt[ch_.choose(cw)];
    part.children.push_back({white(n2, -s2, ic), s2, marked});
  }
};

class MobileBuilder {
 public:
  explicit MobileBuilder(int particles_cap) : p_(particles_cap) {}

  Mobile build(const MobilePart& root) {
    int r = m_.add_node(NodeKind::labeled, 0);
    labeled(r, root, 0);
    const auto& rot = m_.nodes[std::size_t(r)].rot;
    m_.root = std::make_pair(r, rot.empty() ? 0 : int(rot.size()) - 1);
    return std::move(m_);
  }

 private:
  Mobile m_;
  int p_;

  int particles(const MobilePart& x) const { return p_ > 0 ? x.charge : -1; }

  void labeled(int node, const MobilePart& part, int label) {
    for (const auto& c : part.children) {
      int w = m_.add_node(NodeKind::white, 0, particles(*c.part));
      m_.add_edge(node, w, false);
      white(w, *c.part, label - 1, label);
    }
  }

  /// Walks the white node's slots clockwise from value v; the walk must end at `end`.
  void white(int node, const MobilePart& part, int v, int end) {
    for (const auto& c : part.children) {
      if (c.part->kind == NodeKind::labeled) {
        int l = m_.add_node(NodeKind::labeled, v);
        m_.add_edge(node, l, false);
        labeled(l, *c.part, v);
        v -= 1;
        continue;
      }
      int b = m_.add_node(NodeKind::black, 0, particles(*c.part));
      m_.add_edge(node, b, true, c.marked, v, v + c.delta);
      black(b, *c.part, v, v + c.delta);
      v += c.delta;
    }
    if (v != end) fail(ErrorCode::internal, "white node does not close up");
  }

  void black(int node, const MobilePart& part, int exit_parent, int entry_parent) {
    int cur = exit_parent + part.eps[0];
    for (std::size_t i = 0; i < part.children.size(); ++i) {
      const auto& c = part.children[i];
      int w = m_.add_node(NodeKind::white, 0, particles(*c.part));
      m_.add_edge(node, w, true, c.marked, cur, cur - c.delta);
      white(w, *c.part, cur, cur - c.delta);
      cur = cur - c.delta + part.eps[i + 1];
    }
    if (cur != entry_parent) fail(ErrorCode::internal, "black node does not close up");
  }
};

/// Model weight of a mobile: face classes of its nodes and y per blocked edge (per pair in pairs mode).
inline AuxPoly tree_weight(const MobilePart& root, const ModelSpec& spec) {
  std::function<AuxPoly(const MobilePart&)> rec = [&](const MobilePart& x) -> AuxPoly {
    AuxPoly w(1);
    if (x.kind != NodeKind::labeled) {
      bool found = false;
      for (const auto& c : spec.classes(x.kind == NodeKind::white ? Color::white : Color::black))
        if (c.valence == x.valence && c.charge == x.charge) w = c.weight, found = true;
      if (!found) fail(ErrorCode::internal, "mobile node without a face class");
    }
    for (const auto& c : x.children) {
      w *= rec(*c.part);
      bool flagged = c.part->kind != NodeKind::labeled && x.kind != NodeKind::labeled;
      if (flagged && c.marked) {
        bool pair_child = spec.mode == BlockMode::pairs && x.kind == NodeKind::black;
        if (!pair_child) w *= spec.y;
      }
    }
    return w;
  };
  return rec(root);
}

}  // namespace detail

/// Unrestricted mobile rooted at a labeled corner of label 0, with its model weight.
struct EnumeratedMobile {
  Mobile mobile;
  int size = 0;  // white plus black nodes
  AuxPoly weight;
};

/// Every rooted unrestricted mobile of the model with at most `max_nodes` white and black nodes,
/// each exactly once.
inline void enumerate_mobiles(const ModelSpec& spec, int max_nodes, const std::function<void(const EnumeratedMobile&)>& emit) {
  if (max_nodes > 12) fail(ErrorCode::cap_exceeded, "mobile enumeration is limited to 12 nodes");
  // unit weights count shapes; the model weight is recomputed per mobile
  ModelSpec unit = spec;
  for (auto* side : {&unit.white, &unit.black})
    for (auto& [k, w] : *side) w = w.is_zero() ? w : AuxPoly(1);
  unit.z.assign(std::size_t(unit.p), AuxPoly(1));
  unit.y = AuxPoly(1);
  auto g = model_grammar<Rational>(unit, Grading("faces"), max_nodes, [](const AuxPoly& p) { return p.constant_term(); });
  for (int n = 0; n <= max_nodes; ++n) {
    if (g.count(n) == 0) continue;
    ExhaustiveChooser ch;
    do {
      detail::Decomposer dec(g, ch);
      PartPtr root = dec.labeled(n);
      EnumeratedMobile em{detail::MobileBuilder(spec.p).build(*root), n, detail::tree_weight(*root, spec)};
      emit(em);
    } while (ch.advance());
  }
}

/// Shifts labels and flags so that the smallest label is 1 or the smallest flag is 0.
inline Mobile well_labeled(Mobile m) {
  int low = 1 << 30;
  for (const auto& n : m.nodes)
    if (n.kind == NodeKind::labeled) low = std::min(low, n.label);
  for (int e = 0; e < m.edge_count(); ++e)
    if (m.flagged[std::size_t(e)]) low = std::min({low, m.flag_left[std::size_t(2 * e)] + 1, m.flag_left[std::size_t(2 * e + 1)] + 1});
  int shift = 1 - low;
  for (auto& n : m.nodes)
    if (n.kind == NodeKind::labeled) n.label += shift;
  for (int e = 0; e < m.edge_count(); ++e)
    if (m.flagged[std::size_t(e)]) {
      m.flag_left[std::size_t(2 * e)] += shift;
      m.flag_left[std::size_t(2 * e + 1)] += shift;
    }
  return m;
}

/// Exact weighted counts for sampling: variables other than the grading one take `values`.
inline MobileGrammar<Rational> sampling_grammar(const ModelSpec& spec, int size, const std::map<std::string, Rational>& values) {
  Grading gr = default_grading(spec);
  auto value = [&](const AuxPoly& p) {
    Rational v = p.evaluate(values);
    if (v < 0) fail(ErrorCode::invalid_input, "sampling needs non-negative weights; got " + p.to_string());
    return v;
  };
  return model_grammar<Rational>(spec, gr, size, value);
}

/// Random rooted unrestricted mobile of the given size (grading degree), drawn with probability
/// proportional to its weight. Deterministic per seed.
inline Mobile sample_mobile(const ModelSpec& spec, int target_size, std::uint64_t seed,
                            const std::map<std::string, Rational>& values = {}) {
  if (target_size < 0) fail(ErrorCode::invalid_input, "size must be non-negative");
  auto g = sampling_grammar(spec, target_size, values);
  if (g.count(target_size) == 0) fail(ErrorCode::order_too_low, "the model has no object of size " + std::to_string(target_size));
  RandomChooser ch(seed);
  detail::Decomposer dec(g, ch);
  PartPtr root = dec.labeled(target_size);
  return detail::MobileBuilder(spec.p).build(*root);
}

}  // namespace mobiles
