#pragma once

#include <algorithm>
#include <deque>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "mobiles/errors.hpp"

namespace mobiles {

/// Rotation system on darts 0..2E-1. alpha(d) = d^1 pairs darts into edges, sigma is the
/// counterclockwise rotation around vertices and phi = sigma o alpha walks faces, keeping
/// the face on the right of each dart.
class PlanarMap {
 public:
  PlanarMap() = default;

  int darts() const { return int(sigma_.size()); }
  int edges() const { return darts() / 2; }
  int vertices() const { return V_; }
  int faces() const { return F_; }

  static int alpha(int d) { return d ^ 1; }
  int sigma(int d) const { return sigma_[std::size_t(d)]; }
  int sigma_inv(int d) const { return sigma_inv_[std::size_t(d)]; }
  int phi(int d) const { return sigma_[std::size_t(d ^ 1)]; }
  int phi_inv(int d) const { return sigma_inv_[std::size_t(d)] ^ 1; }

  /// Vertex the dart leaves from.
  int vertex_of(int d) const { return vertex_[std::size_t(d)]; }
  /// Vertex the dart points to.
  int head_of(int d) const { return vertex_[std::size_t(d ^ 1)]; }
  /// Face on the right of the dart.
  int face_of(int d) const { return face_[std::size_t(d)]; }

  const std::vector<int>& sigma_images() const { return sigma_; }

  /// Darts leaving v in counterclockwise order, starting from the smallest.
  std::vector<int> vertex_darts(int v) const { return orbit(first_vertex_dart_[std::size_t(v)], false); }
  /// Darts with face f on their right, in the clockwise order they bound it.
  std::vector<int> face_darts(int f) const { return orbit(first_face_dart_[std::size_t(f)], true); }

  int valence(int v) const { return int(vertex_darts(v).size()); }
  int face_degree(int f) const { return int(face_darts(f).size()); }

  /// Validates and builds a map from sigma with the implicit pairing d <-> d^1.
  static PlanarMap from_sigma(std::vector<int> sigma) {
    PlanarMap m;
    if (sigma.empty() || sigma.size() % 2) fail(ErrorCode::not_involution, "dart count must be even and positive");
    int n = int(sigma.size());
    std::vector<int> inv(sigma.size(), -1);
    for (int d = 0; d < n; ++d) {
      int s = sigma[std::size_t(d)];
      if (s < 0 || s >= n || inv[std::size_t(s)] != -1) fail(ErrorCode::invalid_input, "sigma is not a permutation");
      inv[std::size_t(s)] = d;
    }
    m.sigma_ = std::move(sigma);
    m.sigma_inv_ = std::move(inv);
    m.derive();
    if (!m.connected()) fail(ErrorCode::not_connected, "sigma and alpha do not act transitively");
    if (m.V_ - m.edges() + m.F_ != 2)
      fail(ErrorCode::non_planar, "V-E+F = " + std::to_string(m.V_ - m.edges() + m.F_) + ", expected 2");
    return m;
  }

  /// Builds a map from an arbitrary fixed-point-free involution alpha and rotation sigma,
  /// relabeling darts so that alpha becomes d <-> d^1.
  static PlanarMap build(const std::vector<int>& alpha, const std::vector<int>& sigma) {
    std::size_t n = alpha.size();
    if (n == 0 || n % 2 || sigma.size() != n) fail(ErrorCode::not_involution, "alpha and sigma must act on the same even dart set");
    for (std::size_t d = 0; d < n; ++d) {
      int a = alpha[d];
      if (a < 0 || std::size_t(a) >= n || std::size_t(a) == d || std::size_t(alpha[std::size_t(a)]) != d)
        fail(ErrorCode::not_involution, "alpha is not a fixed-point-free involution");
    }
    std::vector<int> label(n, -1);
    int next = 0;
    for (std::size_t d = 0; d < n; ++d)
      if (label[d] < 0) {
        label[d] = next++;
        label[std::size_t(alpha[d])] = next++;
      }
    std::vector<int> s(n);
    for (std::size_t d = 0; d < n; ++d) {
      if (sigma[d] < 0 || std::size_t(sigma[d]) >= n) fail(ErrorCode::invalid_input, "sigma is not a permutation");
      s[std::size_t(label[d])] = label[std::size_t(sigma[d])];
    }
    return from_sigma(std::move(s));
  }

  /// Applies a dart relabeling (new = perm[old]) that maps alpha-pairs to alpha-pairs.
  PlanarMap relabeled(const std::vector<int>& perm) const {
    std::vector<int> s(sigma_.size());
    for (int d = 0; d < darts(); ++d) s[std::size_t(perm[std::size_t(d)])] = perm[std::size_t(sigma(d))];
    return from_sigma(std::move(s));
  }

 private:
  std::vector<int> orbit(int start, bool face) const {
    std::vector<int> out;
    int d = start;
    do {
      out.push_back(d);
      d = face ? phi(d) : sigma(d);
    } while (d != start);
    return out;
  }

  void derive() {
    int n = darts();
    vertex_.assign(std::size_t(n), -1);
    face_.assign(std::size_t(n), -1);
    first_vertex_dart_.clear();
    first_face_dart_.clear();
    for (int d = 0; d < n; ++d) {
      if (vertex_[std::size_t(d)] < 0) {
        int v = int(first_vertex_dart_.size());
        first_vertex_dart_.push_back(d);
        for (int x = d; vertex_[std::size_t(x)] < 0; x = sigma(x)) vertex_[std::size_t(x)] = v;
      }
      if (face_[std::size_t(d)] < 0) {
        int f = int(first_face_dart_.size());
        first_face_dart_.push_back(d);
        for (int x = d; face_[std::size_t(x)] < 0; x = phi(x)) face_[std::size_t(x)] = f;
      }
    }
    V_ = int(first_vertex_dart_.size());
    F_ = int(first_face_dart_.size());
  }

  bool connected() const {
    std::vector<bool> seen(std::size_t(darts()), false);
    std::vector<int> stack{0};
    seen[0] = true;
    int count = 1;
    while (!stack.empty()) {
      int d = stack.back();
      stack.pop_back();
      for (int x : {sigma(d), alpha(d)})
        if (!seen[std::size_t(x)]) {
          seen[std::size_t(x)] = true;
          ++count;
          stack.push_back(x);
        }
    }
    return count == darts();
  }

  std::vector<int> sigma_, sigma_inv_;
  std::vector<int> vertex_, face_;
  std::vector<int> first_vertex_dart_, first_face_dart_;
  int V_ = 0, F_ = 0;
};

enum class Color { black, white };

/// Proper 2-coloring of faces with the face on the right of dart 0 black.
inline std::vector<Color> bicolor_faces(const PlanarMap& m) {
  std::vector<int> col(std::size_t(m.faces()), -1);
  std::deque<int> queue{m.face_of(0)};
  col[std::size_t(m.face_of(0))] = 0;
  while (!queue.empty()) {
    int f = queue.front();
    queue.pop_front();
    for (int d : m.face_darts(f)) {
      int g = m.face_of(d ^ 1);
      if (g == f) fail(ErrorCode::not_eulerian, "an edge has the same face on both sides");
      if (col[std::size_t(g)] < 0) {
        col[std::size_t(g)] = 1 - col[std::size_t(f)];
        queue.push_back(g);
      } else if (col[std::size_t(g)] == col[std::size_t(f)]) {
        fail(ErrorCode::not_eulerian, "adjacent faces would share a color");
      }
    }
  }
  std::vector<Color> out;
  for (int c : col) out.push_back(c == 0 ? Color::black : Color::white);
  return out;
}

inline bool is_eulerian(const PlanarMap& m) {
  for (int v = 0; v < m.vertices(); ++v)
    if (m.valence(v) % 2) return false;
  return true;
}

/// Per-dart flag: true when the dart runs in canonical direction (black face on its right,
/// i.e. clockwise around black faces).
inline std::vector<bool> canonical_orientation(const PlanarMap& m, const std::vector<Color>& colors) {
  std::vector<bool> out(std::size_t(m.darts()));
  for (int d = 0; d < m.darts(); ++d) out[std::size_t(d)] = colors[std::size_t(m.face_of(d))] == Color::black;
  return out;
}

/// Relabels darts so that every even dart is canonical; afterwards dart 0 has a black face on
/// its right, matching the coloring convention.
inline PlanarMap with_canonical_even_darts(const PlanarMap& m) {
  auto colors = bicolor_faces(m);
  std::vector<int> perm(std::size_t(m.darts()));
  for (int d = 0; d < m.darts(); d += 2) {
    bool even_ok = colors[std::size_t(m.face_of(d))] == Color::black;
    perm[std::size_t(d)] = even_ok ? d : d + 1;
    perm[std::size_t(d + 1)] = even_ok ? d + 1 : d;
  }
  return m.relabeled(perm);
}

/// Standard dual: vertices become faces, alpha is kept and sigma becomes phi^-1.
inline PlanarMap dual(const PlanarMap& m) {
  std::vector<int> s(std::size_t(m.darts()));
  for (int d = 0; d < m.darts(); ++d) s[std::size_t(d)] = m.phi_inv(d);
  return PlanarMap::from_sigma(std::move(s));
}

/// Replaces every bivalent face of the given color by a single edge.
inline PlanarMap squeeze_bivalent(const PlanarMap& m, const std::vector<Color>& colors, Color which) {
  std::vector<bool> removed(std::size_t(m.darts()), false);
  for (int f = 0; f < m.faces(); ++f) {
    if (colors[std::size_t(f)] != which) continue;
    auto ds = m.face_darts(f);
    if (ds.size() != 2) fail(ErrorCode::not_bivalent, "face " + std::to_string(f) + " has degree " + std::to_string(ds.size()));
    int e2 = std::max(ds[0], ds[1]);
    removed[std::size_t(e2)] = removed[std::size_t(e2 ^ 1)] = true;
  }
  std::vector<int> newid(std::size_t(m.darts()), -1);
  int next = 0;
  for (int d = 0; d < m.darts(); ++d)
    if (!removed[std::size_t(d)]) newid[std::size_t(d)] = next++;
  std::vector<int> s(static_cast<std::size_t>(next));
  for (int d = 0; d < m.darts(); ++d) {
    if (removed[std::size_t(d)]) continue;
    int x = m.sigma(d);
    while (removed[std::size_t(x)]) x = m.sigma(x);
    s[std::size_t(newid[std::size_t(d)])] = newid[std::size_t(x)];
  }
  return PlanarMap::from_sigma(std::move(s));
}

/// Breadth-first relabeling from a root dart. Newly met darts x get label 2k and alpha(x)
/// gets 2k+1; the result is the sequence of relabeled sigma images.
inline std::vector<int> canonical_labels(const PlanarMap& m, int root) {
  std::vector<int> label(std::size_t(m.darts()), -1);
  std::vector<int> by_label;
  by_label.reserve(std::size_t(m.darts()));
  auto visit = [&](int x) {
    if (label[std::size_t(x)] >= 0) return;
    label[std::size_t(x)] = int(by_label.size());
    by_label.push_back(x);
    label[std::size_t(x ^ 1)] = int(by_label.size());
    by_label.push_back(x ^ 1);
  };
  visit(root);
  for (std::size_t i = 0; i < by_label.size(); ++i) visit(m.sigma(by_label[i]));
  return label;
}

inline std::vector<int> canonical_form(const PlanarMap& m, int root) {
  auto label = canonical_labels(m, root);
  std::vector<int> code(std::size_t(m.darts()));
  for (int d = 0; d < m.darts(); ++d) code[std::size_t(label[std::size_t(d)])] = label[std::size_t(m.sigma(d))];
  return code;
}

/// Isomorphism key of an unrooted map: least canonical form over all roots.
inline std::vector<int> unrooted_key(const PlanarMap& m) {
  std::vector<int> best;
  for (int r = 0; r < m.darts(); ++r) {
    auto c = canonical_form(m, r);
    if (best.empty() || c < best) best = std::move(c);
  }
  return best;
}

enum class BlockMode { directed, pairs, none };

inline std::string to_string(BlockMode m) {
  switch (m) {
    case BlockMode::directed: return "directed";
    case BlockMode::pairs: return "pairs";
    case BlockMode::none: return "none";
  }
  return "directed";
}

inline BlockMode parse_block_mode(const std::string& s) {
  if (s == "directed") return BlockMode::directed;
  if (s == "pairs") return BlockMode::pairs;
  if (s == "none") return BlockMode::none;
  fail(ErrorCode::invalid_input, "unknown blocking mode '" + s + "'");
}

/// A pointed Eulerian map with a set of blocked edges (edge e = darts 2e, 2e+1).
struct BlockedConfig {
  PlanarMap map;
  int origin = 0;
  std::vector<bool> blocked;
  BlockMode mode = BlockMode::directed;

  int blocked_count() const { return int(std::count(blocked.begin(), blocked.end(), true)); }
};

inline BlockedConfig make_config(const PlanarMap& m, int origin, std::vector<bool> blocked = {},
                                 BlockMode mode = BlockMode::directed) {
  if (origin < 0 || origin >= m.vertices()) fail(ErrorCode::invalid_input, "origin vertex out of range");
  if (blocked.empty()) blocked.assign(std::size_t(m.edges()), false);
  if (int(blocked.size()) != m.edges()) fail(ErrorCode::invalid_input, "blocked set size mismatch");
  return BlockedConfig{m, origin, std::move(blocked), mode};
}

struct DistanceResult {
  std::vector<int> dist;  // -1 where unreachable
  int unreachable = -1;   // first unreachable vertex, or -1
};

inline DistanceResult try_distances(const BlockedConfig& c) {
  const PlanarMap& m = c.map;
  auto canon = canonical_orientation(m, bicolor_faces(m));
  DistanceResult r;
  r.dist.assign(std::size_t(m.vertices()), -1);
  r.dist[std::size_t(c.origin)] = 0;
  std::deque<int> queue{c.origin};
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int d : m.vertex_darts(v)) {
      if (!canon[std::size_t(d)] || c.blocked[std::size_t(d / 2)]) continue;
      int w = m.head_of(d);
      if (r.dist[std::size_t(w)] < 0) {
        r.dist[std::size_t(w)] = r.dist[std::size_t(v)] + 1;
        queue.push_back(w);
      }
    }
  }
  for (int v = 0; v < m.vertices(); ++v)
    if (r.dist[std::size_t(v)] < 0) {
      r.unreachable = v;
      break;
    }
  return r;
}

/// Oriented distances from the origin over non-blocked canonical edges.
inline std::vector<int> distances(const BlockedConfig& c) {
  auto r = try_distances(c);
  if (r.unreachable >= 0) fail(ErrorCode::connectivity_violated, "vertex " + std::to_string(r.unreachable) + " unreachable");
  return r.dist;
}

/// Checks the per-mode rule on which edges may be blocked.
inline bool mode_allows(const BlockedConfig& c, std::string* why = nullptr) {
  const PlanarMap& m = c.map;
  if (c.mode == BlockMode::none) {
    if (c.blocked_count() && why) *why = "mode none admits no blocked edge";
    return c.blocked_count() == 0;
  }
  if (c.mode == BlockMode::directed) return true;
  auto colors = bicolor_faces(m);
  for (int f = 0; f < m.faces(); ++f) {
    if (colors[std::size_t(f)] != Color::black) continue;
    auto ds = m.face_darts(f);
    int b = 0;
    for (int d : ds) b += c.blocked[std::size_t(d / 2)];
    bool ok = ds.size() == 2 ? (b == 0 || b == 2) : b == 0;
    if (!ok) {
      if (why) *why = "black face " + std::to_string(f) + " violates the pairs rule";
      return false;
    }
  }
  return true;
}

/// True when blocked duals contain no cycle.
inline bool blocked_duals_acyclic(const BlockedConfig& c) {
  const PlanarMap& m = c.map;
  std::vector<int> parent(std::size_t(m.faces()));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[std::size_t(x)] != x) x = parent[std::size_t(x)] = parent[std::size_t(parent[std::size_t(x)])];
    return x;
  };
  for (int e = 0; e < m.edges(); ++e) {
    if (!c.blocked[std::size_t(e)]) continue;
    int a = find(m.face_of(2 * e)), b = find(m.face_of(2 * e + 1));
    if (a == b) return false;
    parent[std::size_t(a)] = b;
  }
  return true;
}

struct BlockingCheck {
  bool valid = false;
  std::string witness;
};

inline BlockingCheck validate_blocking(const BlockedConfig& c) {
  BlockingCheck out;
  std::string why;
  if (!mode_allows(c, &why)) {
    out.witness = why;
    return out;
  }
  auto r = try_distances(c);
  if (r.unreachable >= 0) {
    out.witness = "vertex " + std::to_string(r.unreachable) + " unreachable from origin";
    return out;
  }
  if (!blocked_duals_acyclic(c)) fail(ErrorCode::internal, "reachable configuration with a cycle of blocked duals");
  out.valid = true;
  return out;
}

/// Least code over color-preserving roots: canonical form from the root, then the origin
/// label and the sorted blocked edge labels. Equal keys iff the decorated maps are isomorphic.
inline std::vector<int> config_key(const BlockedConfig& c) {
  const PlanarMap& m = c.map;
  auto canon = canonical_orientation(m, bicolor_faces(m));
  std::vector<int> best;
  for (int r = 0; r < m.darts(); ++r) {
    if (!canon[std::size_t(r)]) continue;
    auto label = canonical_labels(m, r);
    std::vector<int> code(std::size_t(m.darts()));
    for (int d = 0; d < m.darts(); ++d) code[std::size_t(label[std::size_t(d)])] = label[std::size_t(m.sigma(d))];
    int origin_label = m.darts();
    for (int d : m.vertex_darts(c.origin)) origin_label = std::min(origin_label, label[std::size_t(d)]);
    code.push_back(-1);
    code.push_back(origin_label);
    std::vector<int> bl;
    for (int e = 0; e < m.edges(); ++e)
      if (c.blocked[std::size_t(e)]) bl.push_back(std::min(label[std::size_t(2 * e)], label[std::size_t(2 * e + 1)]));
    std::sort(bl.begin(), bl.end());
    code.push_back(-2);
    code.insert(code.end(), bl.begin(), bl.end());
    if (best.empty() || code < best) best = std::move(code);
  }
  return best;
}

/// Representative of the isomorphism class of a decorated map: darts relabeled from the root
/// that minimizes config_key, then oriented so that even darts are canonical.
inline BlockedConfig canonical_config(const BlockedConfig& c) {
  const PlanarMap& m = c.map;
  auto canon = canonical_orientation(m, bicolor_faces(m));
  std::vector<int> best_code, best_label;
  for (int r = 0; r < m.darts(); ++r) {
    if (!canon[std::size_t(r)]) continue;
    auto label = canonical_labels(m, r);
    BlockedConfig probe{m.relabeled(label), 0, std::vector<bool>(std::size_t(m.edges())), c.mode};
    probe.origin = probe.map.vertex_of(label[std::size_t(m.vertex_darts(c.origin).front())]);
    for (int e = 0; e < m.edges(); ++e) probe.blocked[std::size_t(label[std::size_t(2 * e)] / 2)] = c.blocked[std::size_t(e)];
    auto code = canonical_form(probe.map, 0);
    code.push_back(-1);
    int origin_label = m.darts();
    for (int d : probe.map.vertex_darts(probe.origin)) origin_label = std::min(origin_label, d);
    code.push_back(origin_label);
    for (int e = 0; e < m.edges(); ++e) code.push_back(probe.blocked[std::size_t(e)]);
    if (best_code.empty() || code < best_code) {
      best_code = std::move(code);
      best_label = std::move(label);
    }
  }
  PlanarMap relabeled = m.relabeled(best_label);
  std::vector<bool> blocked(std::size_t(m.edges()));
  for (int e = 0; e < m.edges(); ++e) blocked[std::size_t(best_label[std::size_t(2 * e)] / 2)] = c.blocked[std::size_t(e)];
  auto colors = bicolor_faces(relabeled);
  int od = best_label[std::size_t(m.vertex_darts(c.origin).front())];
  if (colors[std::size_t(relabeled.face_of(od & ~1))] != Color::black) od ^= 1;
  PlanarMap out = with_canonical_even_darts(relabeled);
  return BlockedConfig{out, out.vertex_of(od), std::move(blocked), c.mode};
}

}  // namespace mobiles
