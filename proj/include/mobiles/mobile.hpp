#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mobiles/planar_map.hpp"

namespace mobiles {

enum class NodeKind { labeled, white, black };

inline std::string to_string(NodeKind k) {
  switch (k) {
    case NodeKind::labeled: return "labeled";
    case NodeKind::white: return "white";
    case NodeKind::black: return "black";
  }
  return "labeled";
}

struct MobileNode {
  NodeKind kind = NodeKind::labeled;
  int label = 0;        // labeled vertices only
  int particles = -1;   // white/black nodes, -1 when absent
  std::vector<int> rot; // incident half-edges in clockwise order
};

/// Plane tree with labeled vertices and black/white nodes. Edge e owns half-edges 2e and
/// 2e+1; flag_left[h] is the flag on the walker's left when walking from node(h).
struct Mobile {
  std::vector<MobileNode> nodes;
  std::vector<int> half_node;
  std::vector<int> flag_left;
  std::vector<bool> flagged;  // per edge; false means a white-labeled (type iii) edge
  std::vector<bool> marked;   // per edge
  std::optional<std::pair<int, int>> root;  // (labeled node, corner index)

  int edge_count() const { return int(flagged.size()); }
  int node_count() const { return int(nodes.size()); }
  int node_of(int h) const { return half_node[std::size_t(h)]; }
  static int twin(int h) { return h ^ 1; }

  int add_node(NodeKind kind, int label = 0, int particles = -1) {
    nodes.push_back(MobileNode{kind, label, particles, {}});
    return int(nodes.size()) - 1;
  }

  /// Adds an edge a-b and appends its half-edges to both rotations. For a flagged edge,
  /// `left_ab` is the flag on the left walking a->b and `left_ba` the one walking b->a.
  int add_edge(int a, int b, bool is_flagged, bool is_marked = false, int left_ab = 0, int left_ba = 0) {
    int e = edge_count();
    half_node.push_back(a);
    half_node.push_back(b);
    flag_left.push_back(left_ab);
    flag_left.push_back(left_ba);
    flagged.push_back(is_flagged);
    marked.push_back(is_marked);
    nodes[std::size_t(a)].rot.push_back(2 * e);
    nodes[std::size_t(b)].rot.push_back(2 * e + 1);
    return e;
  }

  bool is_flagged_half(int h) const { return flagged[std::size_t(h / 2)]; }
  bool is_marked_half(int h) const { return marked[std::size_t(h / 2)]; }

  /// Label met just before crossing h when turning clockwise around node(h).
  int entry(int h) const {
    if (!is_flagged_half(h)) return nodes[std::size_t(labeled_end(h))].label;
    return flag_left[std::size_t(h)];
  }
  /// Label met just after crossing h when turning clockwise around node(h).
  int exit(int h) const {
    if (!is_flagged_half(h)) return nodes[std::size_t(labeled_end(h))].label;
    return flag_left[std::size_t(h ^ 1)];
  }

  int labeled_end(int h) const {
    int a = node_of(h), b = node_of(h ^ 1);
    return nodes[std::size_t(a)].kind == NodeKind::labeled ? a : b;
  }

  std::vector<int> rotation_positions() const {
    std::vector<int> pos(half_node.size(), -1);
    for (const auto& n : nodes)
      for (std::size_t i = 0; i < n.rot.size(); ++i) pos[std::size_t(n.rot[i])] = int(i);
    return pos;
  }

  int next_cw(int h, const std::vector<int>& pos) const {
    const auto& rot = nodes[std::size_t(node_of(h))].rot;
    return rot[(std::size_t(pos[std::size_t(h)]) + 1) % rot.size()];
  }

  /// Black effective valence: flagged edges plus clockwise label increments around the node.
  int black_valence(int node) const {
    const auto& rot = nodes[std::size_t(node)].rot;
    int k = int(rot.size());
    for (std::size_t i = 0; i < rot.size(); ++i) k += entry(rot[(i + 1) % rot.size()]) - exit(rot[i]);
    return k;
  }

  int labeled_count() const {
    return int(std::count_if(nodes.begin(), nodes.end(), [](const MobileNode& n) { return n.kind == NodeKind::labeled; }));
  }
};

struct Diagnostics {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

inline Diagnostics check_well_labeled(const Mobile& m) {
  Diagnostics d;
  auto bad = [&](const std::string& s) { d.problems.push_back(s); };
  int N = m.node_count(), E = m.edge_count();
  if (N == 0) {
    bad("empty mobile");
    return d;
  }
  if (N != E + 1) bad("node count " + std::to_string(N) + " != edge count + 1");
  {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(N));
    for (int e = 0; e < E; ++e) {
      adj[std::size_t(m.node_of(2 * e))].push_back(m.node_of(2 * e + 1));
      adj[std::size_t(m.node_of(2 * e + 1))].push_back(m.node_of(2 * e));
    }
    std::vector<bool> seen(std::size_t(N), false);
    std::vector<int> st{0};
    seen[0] = true;
    int c = 1;
    while (!st.empty()) {
      int x = st.back();
      st.pop_back();
      for (int y : adj[std::size_t(x)])
        if (!seen[std::size_t(y)]) seen[std::size_t(y)] = true, ++c, st.push_back(y);
    }
    if (c != N) bad("mobile is not connected");
  }
  bool has_one = false;
  for (int e = 0; e < E; ++e) {
    auto ka = m.nodes[std::size_t(m.node_of(2 * e))].kind, kb = m.nodes[std::size_t(m.node_of(2 * e + 1))].kind;
    if (m.flagged[std::size_t(e)]) {
      bool ok = (ka == NodeKind::white && kb == NodeKind::black) || (ka == NodeKind::black && kb == NodeKind::white);
      if (!ok) bad("flagged edge " + std::to_string(e) + " does not join white and black nodes");
      for (int h : {2 * e, 2 * e + 1}) {
        if (m.flag_left[std::size_t(h)] < 0) bad("negative flag on edge " + std::to_string(e));
        if (m.flag_left[std::size_t(h)] == 0) has_one = true;
      }
    } else {
      bool ok = (ka == NodeKind::white && kb == NodeKind::labeled) || (ka == NodeKind::labeled && kb == NodeKind::white);
      if (!ok) bad("edge " + std::to_string(e) + " of type iii does not join a white node and a labeled vertex");
      if (m.marked[std::size_t(e)]) bad("type iii edge " + std::to_string(e) + " is marked");
    }
  }
  if (!d.ok()) return d;
  for (int x = 0; x < N; ++x) {
    const auto& node = m.nodes[std::size_t(x)];
    const auto& rot = node.rot;
    std::string nx = std::to_string(x);
    if (node.kind == NodeKind::labeled) {
      if (node.label <= 0) bad("labeled vertex " + nx + " has non-positive label");
      if (node.label == 1) has_one = true;
      continue;
    }
    if (rot.empty()) {
      bad("node " + nx + " is isolated");
      continue;
    }
    for (std::size_t i = 0; i < rot.size(); ++i) {
      int h = rot[i], nh = rot[(i + 1) % rot.size()];
      bool flagged = m.is_flagged_half(h);
      if (node.kind == NodeKind::white) {
        int expect = m.exit(h) - (flagged ? 0 : 1);
        if (m.entry(nh) != expect) bad("white corner rule fails at node " + nx);
        if (flagged && !m.is_marked_half(h) && m.exit(h) < m.entry(h)) bad("white crossing rule fails at node " + nx);
      } else {
        if (!flagged) bad("black node " + nx + " has a type iii edge");
        if (m.entry(nh) < m.exit(h)) bad("black corner rule fails at node " + nx);
        if (flagged && !m.is_marked_half(h) && m.exit(h) > m.entry(h)) bad("black crossing rule fails at node " + nx);
      }
    }
  }
  if (!has_one) bad("no vertex labeled 1 and no flag labeled 0");
  return d;
}

struct Token {
  bool corner = false;  // labeled corner, otherwise a flag
  int label = 0;
  int node = -1;        // corner: labeled node
  int corner_index = 0; // corner: position in rot of the half-edge it follows
  int half = -1;        // flag: half-edge walked when the flag was read
};

/// Clockwise contour: walk h then continue with the half-edge after twin(h).
inline std::vector<Token> contour_word(const Mobile& m) {
  std::vector<Token> w;
  if (m.edge_count() == 0) {
    for (int x = 0; x < m.node_count(); ++x)
      if (m.nodes[std::size_t(x)].kind == NodeKind::labeled) w.push_back(Token{true, m.nodes[std::size_t(x)].label, x, 0, -1});
    return w;
  }
  auto pos = m.rotation_positions();
  int h0 = 0, h = h0;
  do {
    if (m.is_flagged_half(h)) w.push_back(Token{false, m.flag_left[std::size_t(h)], -1, 0, h});
    int t = h ^ 1;
    int y = m.node_of(t);
    if (m.nodes[std::size_t(y)].kind == NodeKind::labeled) w.push_back(Token{true, m.nodes[std::size_t(y)].label, y, pos[std::size_t(t)], -1});
    h = m.next_cw(t, pos);
  } while (h != h0);
  return w;
}

/// Ratchet: after a corner the next label is at least one less, after a flag at least equal.
inline void check_ratchet(const std::vector<Token>& w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Token& a = w[i];
    const Token& b = w[(i + 1) % w.size()];
    int floor = a.corner ? a.label - 1 : a.label;
    if (b.label < floor)
      fail(ErrorCode::ratchet_violated, "label drops from " + std::to_string(a.label) + " to " + std::to_string(b.label) + " at position " + std::to_string(i));
  }
}

/// Successor position of each token, or -1 for the origin.
inline std::vector<int> successors(const std::vector<Token>& w) {
  std::size_t L = w.size();
  std::vector<int> succ(L, -1);
  for (std::size_t i = 0; i < L; ++i) {
    int target = w[i].corner ? w[i].label - 1 : w[i].label;
    if (target == 0) continue;
    bool found = false;
    for (std::size_t k = 1; k <= L; ++k) {
      const Token& t = w[(i + k) % L];
      if (t.corner && t.label == target) {
        succ[i] = int((i + k) % L);
        found = true;
        break;
      }
    }
    if (!found) fail(ErrorCode::not_well_labeled, "token " + std::to_string(i) + " has no successor");
  }
  return succ;
}

/// Encodes a pointed Eulerian map with blocked edges as a well-labeled mobile.
inline Mobile to_mobile(const BlockedConfig& c) {
  const PlanarMap& map = c.map;
  if (map.vertices() < 2) fail(ErrorCode::degenerate_map, "single-vertex maps have no mobile");
  auto dist = distances(c);
  auto colors = bicolor_faces(map);
  Mobile mob;
  std::vector<int> face_node(std::size_t(map.faces())), vertex_node(std::size_t(map.vertices()), -1);
  for (int f = 0; f < map.faces(); ++f)
    face_node[std::size_t(f)] = mob.add_node(colors[std::size_t(f)] == Color::white ? NodeKind::white : NodeKind::black);
  for (int v = 0; v < map.vertices(); ++v)
    if (v != c.origin) vertex_node[std::size_t(v)] = mob.add_node(NodeKind::labeled, dist[std::size_t(v)]);
  // half-edge attached at the node next to each map dart (white side, black side, labeled end)
  std::vector<int> at_white(std::size_t(map.darts()), -1), at_black(std::size_t(map.darts()), -1),
      at_vertex(std::size_t(map.darts()), -1);
  for (int f = 0; f < map.faces(); ++f) {
    if (colors[std::size_t(f)] != Color::white) continue;
    for (int d : map.face_darts(f)) {
      int u = map.head_of(d), v = map.vertex_of(d);
      int n = dist[std::size_t(u)], mm = dist[std::size_t(v)];
      bool blocked = c.blocked[std::size_t(d / 2)];
      if (!blocked && mm == n + 1) {
        int e = mob.add_edge(face_node[std::size_t(f)], vertex_node[std::size_t(v)], false);
        at_white[std::size_t(d)] = 2 * e;
        at_vertex[std::size_t(d)] = 2 * e + 1;
      } else {
        int e = mob.add_edge(face_node[std::size_t(f)], face_node[std::size_t(map.face_of(d ^ 1))], true, blocked, mm, n);
        at_white[std::size_t(d)] = 2 * e;
        at_black[std::size_t(d ^ 1)] = 2 * e + 1;
      }
    }
  }
  for (int f = 0; f < map.faces(); ++f) {
    auto& rot = mob.nodes[std::size_t(face_node[std::size_t(f)])].rot;
    rot.clear();
    for (int d : map.face_darts(f)) {
      int h = colors[std::size_t(f)] == Color::white ? at_white[std::size_t(d)] : at_black[std::size_t(d)];
      if (h >= 0) rot.push_back(h);
    }
  }
  for (int v = 0; v < map.vertices(); ++v) {
    if (v == c.origin) continue;
    auto& rot = mob.nodes[std::size_t(vertex_node[std::size_t(v)])].rot;
    rot.clear();
    auto ds = map.vertex_darts(v);
    for (auto it = ds.rbegin(); it != ds.rend(); ++it)
      if (at_vertex[std::size_t(*it)] >= 0) rot.push_back(at_vertex[std::size_t(*it)]);
  }
  return mob;
}

/// Rebuilds the pointed map with blocked edges from a well-labeled mobile.
inline BlockedConfig from_mobile(const Mobile& mob, BlockMode mode = BlockMode::directed) {
  auto diag = check_well_labeled(mob);
  if (!diag.ok()) fail(ErrorCode::not_well_labeled, diag.problems.front());
  if (mob.labeled_count() == 0) fail(ErrorCode::degenerate_map, "mobile without labeled vertices");
  auto w = contour_word(mob);
  check_ratchet(w);
  auto succ = successors(w);
  const int L = int(w.size());

  // chord ends are collected per attachment point: (labeled node, corner) or the origin
  struct End {
    int dart;
    long key;
  };
  std::map<std::pair<int, int>, std::vector<End>> at_corner;
  std::vector<End> at_origin;
  std::map<std::pair<int, int>, int> corner_pos;
  for (int i = 0; i < L; ++i)
    if (w[std::size_t(i)].corner) corner_pos[{w[std::size_t(i)].node, w[std::size_t(i)].corner_index}] = i;

  auto attach_incoming = [&](int target, int source, int dart) {
    if (target < 0) {
      at_origin.push_back(End{dart, source});
      return;
    }
    const Token& t = w[std::size_t(target)];
    long key = ((source - target - 1) % L + L) % L;
    at_corner[{t.node, t.corner_index}].push_back(End{dart, key});
  };

  int edges = 0;
  std::vector<bool> blocked;
  // corner chords: the dart at the successor end is canonical (even)
  for (int i = 0; i < L; ++i) {
    const Token& t = w[std::size_t(i)];
    if (!t.corner) continue;
    int e = edges++;
    blocked.push_back(false);
    attach_incoming(succ[std::size_t(i)], i, 2 * e);
    at_corner[{t.node, t.corner_index}].push_back(End{2 * e + 1, -1});
  }
  // glued flag chords: tail at the successor of the flag read walking black->white
  std::vector<int> flag_pos(mob.half_node.size(), -1);
  for (int i = 0; i < L; ++i)
    if (!w[std::size_t(i)].corner) flag_pos[std::size_t(w[std::size_t(i)].half)] = i;
  for (int e = 0; e < mob.edge_count(); ++e) {
    if (!mob.flagged[std::size_t(e)]) continue;
    int h_wb = mob.nodes[std::size_t(mob.node_of(2 * e))].kind == NodeKind::white ? 2 * e : 2 * e + 1;
    int i_head = flag_pos[std::size_t(h_wb)], i_tail = flag_pos[std::size_t(h_wb ^ 1)];
    int k = edges++;
    blocked.push_back(mob.marked[std::size_t(e)]);
    attach_incoming(succ[std::size_t(i_tail)], i_tail, 2 * k);
    attach_incoming(succ[std::size_t(i_head)], i_head, 2 * k + 1);
  }

  std::vector<int> sigma(std::size_t(2 * edges), -1);
  auto link = [&](const std::vector<int>& ccw) {
    for (std::size_t i = 0; i < ccw.size(); ++i) sigma[std::size_t(ccw[i])] = ccw[(i + 1) % ccw.size()];
  };
  auto sorted_darts = [](std::vector<End> ends) {
    std::stable_sort(ends.begin(), ends.end(), [](const End& a, const End& b) { return a.key < b.key; });
    std::vector<int> out;
    for (const auto& x : ends) out.push_back(x.dart);
    return out;
  };
  for (int x = 0; x < mob.node_count(); ++x) {
    const auto& node = mob.nodes[std::size_t(x)];
    if (node.kind != NodeKind::labeled) continue;
    int corners = std::max<int>(1, int(node.rot.size()));
    std::vector<int> ccw;
    for (int ci = corners - 1; ci >= 0; --ci) {
      auto it = at_corner.find({x, ci});
      if (it == at_corner.end()) continue;
      auto part = sorted_darts(it->second);
      ccw.insert(ccw.end(), part.begin(), part.end());
    }
    link(ccw);
  }
  auto origin_ccw = sorted_darts(at_origin);
  link(origin_ccw);
  if (origin_ccw.empty()) fail(ErrorCode::not_well_labeled, "no chord reaches the origin");
  for (int s : sigma)
    if (s < 0) fail(ErrorCode::internal, "chord end left unattached");

  PlanarMap map = PlanarMap::from_sigma(std::move(sigma));
  auto colors = bicolor_faces(map);
  for (int d = 0; d < map.darts(); d += 2)
    if (colors[std::size_t(map.face_of(d))] != Color::black) fail(ErrorCode::internal, "decoded orientation is inconsistent");
  BlockedConfig out{map, map.vertex_of(origin_ccw.front()), std::move(blocked), mode};
  return out;
}

}  // namespace mobiles
