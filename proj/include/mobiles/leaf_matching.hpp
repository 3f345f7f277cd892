#pragma once

#include <random>
#include <string>
#include <vector>

#include "mobiles/errors.hpp"
#include "mobiles/planar_map.hpp"

namespace mobiles {

/// Plane tree with alternately colored nodes. `around[v]` lists the half-edges at v in ccw
/// order: a node index for a tree edge, `leaf` for a leaf. A leaf takes its node's color.
struct BicoloredTree {
  static constexpr int leaf = -1;
  std::vector<Color> color;
  std::vector<std::vector<int>> around;
  int root_node = 0;  // the distinguished white leaf sits at around[root_node][root_slot]
  int root_slot = 0;

  int nodes() const { return int(color.size()); }
  int leaves(Color c) const {
    int n = 0;
    for (int v = 0; v < nodes(); ++v)
      if (color[std::size_t(v)] == c)
        for (int x : around[std::size_t(v)]) n += x == leaf;
    return n;
  }
};

struct MatchedMap {
  BlockedConfig config;        // the maximally blocked Eulerian map, pointed at its origin
  int root_edge = -1;          // edge dual to the arch of the distinguished leaf
  std::vector<int> face_node;  // tree node behind each face
};

namespace detail {

inline void check_tree(const BicoloredTree& t) {
  int n = t.nodes();
  if (n == 0 || int(t.around.size()) != n) fail(ErrorCode::invalid_input, "tree needs one neighbor list per node");
  int edge_ends = 0;
  for (int v = 0; v < n; ++v)
    for (int w : t.around[std::size_t(v)]) {
      if (w == BicoloredTree::leaf) continue;
      if (w < 0 || w >= n || w == v) fail(ErrorCode::invalid_input, "bad tree neighbor");
      if (t.color[std::size_t(w)] == t.color[std::size_t(v)]) fail(ErrorCode::invalid_input, "adjacent nodes share a color");
      if (std::count(t.around[std::size_t(w)].begin(), t.around[std::size_t(w)].end(), v) != 1)
        fail(ErrorCode::invalid_input, "tree adjacency is not symmetric");
      ++edge_ends;
    }
  if (edge_ends != 2 * (n - 1)) fail(ErrorCode::invalid_input, "node lists do not describe a tree");
  if (t.root_node < 0 || t.root_node >= n || t.root_slot < 0 || t.root_slot >= int(t.around[std::size_t(t.root_node)].size()) ||
      t.around[std::size_t(t.root_node)][std::size_t(t.root_slot)] != BicoloredTree::leaf ||
      t.color[std::size_t(t.root_node)] != Color::white)
    fail(ErrorCode::invalid_input, "distinguished leaf must be a white leaf");
}

}  // namespace detail

/// Connects black and white leaves by non-crossing arches: walking the contour clockwise, a
/// black leaf immediately followed by a white leaf is matched to it, and the pass repeats over
/// the leaves left. The arches and tree edges form a map whose dual is returned, with the tree
/// edges blocked and the origin at the unique vertex from which every vertex is reachable.
inline MatchedMap leaf_matching(const BicoloredTree& t) {
  detail::check_tree(t);
  int nb = t.leaves(Color::black), nw = t.leaves(Color::white);
  if (nb != nw) fail(ErrorCode::unequal_leaves, std::to_string(nb) + " black leaves against " + std::to_string(nw) + " white");
  int n = t.nodes();
  // half-edge ids: tree edges get darts 2e, 2e+1, with the odd dart at the black end so that
  // dart 0 of the dual lies on a black face; leaves are numbered after them
  int tree_edges = n - 1, L = nb + nw;
  std::vector<std::vector<int>> id(static_cast<std::size_t>(n));
  std::vector<int> node_of(static_cast<std::size_t>(2 * tree_edges + L)), leaf_ids;
  int next_edge = 0, next_leaf = 2 * tree_edges;
  for (int v = 0; v < n; ++v) id[std::size_t(v)].assign(t.around[std::size_t(v)].size(), -1);
  for (int v = 0; v < n; ++v)
    for (std::size_t i = 0; i < t.around[std::size_t(v)].size(); ++i) {
      int w = t.around[std::size_t(v)][i];
      if (w == BicoloredTree::leaf) {
        id[std::size_t(v)][i] = next_leaf;
        node_of[std::size_t(next_leaf++)] = v;
        continue;
      }
      if (w < v) continue;
      auto& wl = t.around[std::size_t(w)];
      std::size_t j = std::size_t(std::find(wl.begin(), wl.end(), v) - wl.begin());
      int d = 2 * next_edge++;
      bool v_black = t.color[std::size_t(v)] == Color::black;
      id[std::size_t(v)][i] = v_black ? d + 1 : d;
      id[std::size_t(w)][j] = v_black ? d : d + 1;
      node_of[std::size_t(d)] = v_black ? w : v;
      node_of[std::size_t(d + 1)] = v_black ? v : w;
    }
  int H = 2 * tree_edges + L;
  std::vector<int> rot(static_cast<std::size_t>(H)), rot_inv(static_cast<std::size_t>(H));
  for (int v = 0; v < n; ++v) {
    const auto& ids = id[std::size_t(v)];
    for (std::size_t i = 0; i < ids.size(); ++i) {
      rot[std::size_t(ids[i])] = ids[(i + 1) % ids.size()];
      rot_inv[std::size_t(ids[(i + 1) % ids.size()])] = ids[i];
    }
  }
  // clockwise contour: leave through the previous half-edge in ccw order
  auto opposite = [&](int h) { return h < 2 * tree_edges ? h ^ 1 : -1; };
  int start = id[std::size_t(t.root_node)][std::size_t(t.root_slot)];
  std::vector<int> contour;
  for (int h = start;;) {
    if (h >= 2 * tree_edges) contour.push_back(h);
    int o = opposite(h);
    h = rot_inv[std::size_t(o < 0 ? h : o)];
    if (h == start) break;
  }
  if (int(contour.size()) != L) fail(ErrorCode::internal, "contour missed leaves");
  std::vector<int> mate(std::size_t(H), -1), stack;
  for (int pass = 0; pass < 2 * L; ++pass) {
    int h = contour[std::size_t(pass % L)];
    if (mate[std::size_t(h)] >= 0) continue;
    if (t.color[std::size_t(node_of[std::size_t(h)])] == Color::black) {
      if (pass < L) stack.push_back(h);
    } else if (!stack.empty()) {
      mate[std::size_t(h)] = stack.back();
      mate[std::size_t(stack.back())] = h;
      stack.pop_back();
    }
  }
  // arches become edges: the black-leaf end takes the odd dart
  std::vector<int> relabel(static_cast<std::size_t>(H));
  for (int d = 0; d < 2 * tree_edges; ++d) relabel[std::size_t(d)] = d;
  int e = tree_edges, root_edge = -1;
  for (int h : contour) {
    if (mate[std::size_t(h)] < 0) fail(ErrorCode::internal, "leaf left unmatched");
    if (t.color[std::size_t(node_of[std::size_t(h)])] != Color::white) continue;
    relabel[std::size_t(h)] = 2 * e;
    relabel[std::size_t(mate[std::size_t(h)])] = 2 * e + 1;
    if (h == start) root_edge = e;
    ++e;
  }
  std::vector<int> sigma(static_cast<std::size_t>(H));
  for (int h = 0; h < H; ++h) sigma[std::size_t(relabel[std::size_t(h)])] = relabel[std::size_t(rot[std::size_t(h)])];
  PlanarMap tree_map = PlanarMap::from_sigma(sigma);
  if (tree_map.vertices() - tree_map.edges() + tree_map.faces() != 2) fail(ErrorCode::internal, "arches cross");
  PlanarMap m = dual(tree_map);
  std::vector<int> face_node(static_cast<std::size_t>(m.faces()));
  for (int d = 0; d < m.darts(); ++d) face_node[std::size_t(m.face_of(d))] = tree_map.vertex_of(d ^ 1);
  auto colors = bicolor_faces(m);
  std::vector<int> node_by_vertex(static_cast<std::size_t>(n));
  for (int h = 0; h < H; ++h) node_by_vertex[std::size_t(tree_map.vertex_of(relabel[std::size_t(h)]))] = node_of[std::size_t(h)];
  for (int f = 0; f < m.faces(); ++f) {
    int node = node_by_vertex[std::size_t(face_node[std::size_t(f)])];
    face_node[std::size_t(f)] = node;
    if (colors[std::size_t(f)] != t.color[std::size_t(node)]) fail(ErrorCode::internal, "face colors disagree with node colors");
  }
  std::vector<bool> blocked(std::size_t(m.edges()), false);
  for (int x = 0; x < tree_edges; ++x) blocked[std::size_t(x)] = true;
  int origin = -1;
  for (int v = 0; v < m.vertices(); ++v) {
    if (validate_blocking(make_config(m, v, blocked)).valid) {
      if (origin >= 0) fail(ErrorCode::internal, "several origins reach every vertex");
      origin = v;
    }
  }
  if (origin < 0) fail(ErrorCode::internal, "no origin reaches every vertex");
  return MatchedMap{make_config(m, origin, blocked), root_edge, face_node};
}

/// Random plane tree with alternating colors and as many black as white leaves, rooted at a
/// white leaf. Node count is uniform in [2, max_nodes].
inline BicoloredTree random_balanced_tree(std::mt19937_64& rng, int max_nodes) {
  if (max_nodes < 2) fail(ErrorCode::invalid_input, "need at least two nodes");
  BicoloredTree t;
  int n = std::uniform_int_distribution<int>(2, max_nodes)(rng);
  t.color.push_back(Color::white);
  t.around.emplace_back();
  for (int v = 1; v < n; ++v) {
    int p = std::uniform_int_distribution<int>(0, v - 1)(rng);
    t.color.push_back(t.color[std::size_t(p)] == Color::white ? Color::black : Color::white);
    t.around.push_back({p});
    t.around[std::size_t(p)].push_back(v);
  }
  auto add_leaf = [&](int v) {
    auto& a = t.around[std::size_t(v)];
    auto pos = std::uniform_int_distribution<std::size_t>(0, a.size())(rng);
    a.insert(a.begin() + std::ptrdiff_t(pos), BicoloredTree::leaf);
  };
  for (int v = 0; v < n; ++v) {
    int k = std::uniform_int_distribution<int>(0, 2)(rng);
    for (int i = 0; i < k; ++i) add_leaf(v);
  }
  std::vector<int> of[2];
  for (int v = 0; v < n; ++v) of[t.color[std::size_t(v)] == Color::white].push_back(v);
  auto pick = [&](const std::vector<int>& vs) { return vs[std::uniform_int_distribution<std::size_t>(0, vs.size() - 1)(rng)]; };
  if (t.leaves(Color::white) == 0) add_leaf(pick(of[1]));
  while (t.leaves(Color::black) < t.leaves(Color::white)) add_leaf(pick(of[0]));
  while (t.leaves(Color::white) < t.leaves(Color::black)) add_leaf(pick(of[1]));
  std::vector<std::pair<int, int>> white_leaves;
  for (int v : of[1])
    for (std::size_t i = 0; i < t.around[std::size_t(v)].size(); ++i)
      if (t.around[std::size_t(v)][i] == BicoloredTree::leaf) white_leaves.push_back({v, int(i)});
  auto [rv, rs] = white_leaves[std::uniform_int_distribution<std::size_t>(0, white_leaves.size() - 1)(rng)];
  t.root_node = rv;
  t.root_slot = rs;
  return t;
}

}  // namespace mobiles
