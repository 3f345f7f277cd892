#pragma once

#include <json.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mobiles/gseries.hpp"
#include "mobiles/mobile.hpp"
#include "mobiles/model_spec.hpp"
#include "mobiles/planar_map.hpp"

namespace mobiles {

using Json = nlohmann::ordered_json;

namespace detail {

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorCode::invalid_input, std::string("missing field '") + key + "'");
  return j.at(key);
}

template <class T>
T get_as(const Json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(ErrorCode::invalid_input, std::string("field '") + what + "' has the wrong type");
  }
}

}  // namespace detail

/// Parses text, turning syntax errors into InvalidInput.
inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::invalid_input, std::string("malformed JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------------------------
// Maps. Darts, vertices and blocked darts are 1-based; vertices are numbered in order of their
// smallest dart.

inline Json map_to_json(const BlockedConfig& c) {
  Json j;
  j["darts"] = c.map.darts();
  Json sigma = Json::array();
  for (int s : c.map.sigma_images()) sigma.push_back(s + 1);
  j["sigma"] = sigma;
  Json blocked = Json::array();
  for (int e = 0; e < c.map.edges(); ++e)
    if (c.blocked[std::size_t(e)]) blocked.push_back(2 * e + 1);
  j["blocked_darts"] = blocked;
  j["origin_vertex"] = c.origin + 1;
  j["mode"] = to_string(c.mode);
  return j;
}

/// Reads a map and relabels it so that even darts run clockwise around black faces. A blocked
/// dart blocks its whole edge.
inline BlockedConfig map_from_json(const Json& j) {
  int n = detail::get_as<int>(detail::field(j, "darts"), "darts");
  auto raw = detail::get_as<std::vector<int>>(detail::field(j, "sigma"), "sigma");
  if (int(raw.size()) != n) fail(ErrorCode::invalid_input, "sigma length differs from dart count");
  for (int& s : raw) --s;
  PlanarMap m0 = PlanarMap::from_sigma(raw);
  if (!is_eulerian(m0)) fail(ErrorCode::not_eulerian, "map has a vertex of odd valence");
  int origin = j.contains("origin_vertex") ? detail::get_as<int>(j.at("origin_vertex"), "origin_vertex") - 1 : 0;
  if (origin < 0 || origin >= m0.vertices()) fail(ErrorCode::invalid_input, "origin vertex out of range");
  int origin_dart = m0.vertex_darts(origin).front();
  std::vector<bool> blocked(std::size_t(m0.edges()), false);
  if (j.contains("blocked_darts"))
    for (int d : detail::get_as<std::vector<int>>(j.at("blocked_darts"), "blocked_darts")) {
      if (d < 1 || d > n) fail(ErrorCode::invalid_input, "blocked dart out of range");
      blocked[std::size_t((d - 1) / 2)] = true;
    }
  BlockMode mode = j.contains("mode") ? parse_block_mode(detail::get_as<std::string>(j.at("mode"), "mode")) : BlockMode::directed;
  // the relabeling only swaps the two darts of an edge
  auto colors = bicolor_faces(m0);
  int d = colors[std::size_t(m0.face_of(origin_dart & ~1))] == Color::black ? origin_dart : origin_dart ^ 1;
  PlanarMap m = with_canonical_even_darts(m0);
  return make_config(m, m.vertex_of(d), std::move(blocked), mode);
}

// ---------------------------------------------------------------------------------------------
// Mobiles, as nested plane trees. Children follow the clockwise order around each node,
// starting after the edge to the parent. Flags on a child edge are read walking parent->child.

namespace detail {

inline Json mobile_node_json(const Mobile& m, int node, int parent_half) {
  const auto& nd = m.nodes[std::size_t(node)];
  Json j;
  j["kind"] = to_string(nd.kind);
  if (nd.kind == NodeKind::labeled) j["label"] = nd.label;
  if (nd.kind != NodeKind::labeled && nd.particles >= 0) j["particles"] = nd.particles;
  Json children = Json::array();
  std::size_t start = 0;
  if (parent_half >= 0)
    start = std::size_t(std::find(nd.rot.begin(), nd.rot.end(), parent_half) - nd.rot.begin()) + 1;
  for (std::size_t i = 0; i < nd.rot.size() - (parent_half >= 0 ? 1 : 0); ++i) {
    int h = nd.rot[(start + i) % nd.rot.size()];
    int e = h / 2;
    Json c;
    if (m.flagged[std::size_t(e)]) {
      c["edge"] = "flagged";
      c["marked"] = bool(m.marked[std::size_t(e)]);
      c["flag_left"] = m.flag_left[std::size_t(h)];
      c["flag_right"] = m.flag_left[std::size_t(h ^ 1)];
    } else {
      c["edge"] = "iii";
    }
    c["node"] = mobile_node_json(m, m.node_of(h ^ 1), h ^ 1);
    children.push_back(std::move(c));
  }
  j["children"] = std::move(children);
  return j;
}

inline int mobile_node_from_json(Mobile& m, const Json& j, int depth) {
  if (depth > 100000) fail(ErrorCode::invalid_input, "mobile too deep");
  std::string kind = get_as<std::string>(field(j, "kind"), "kind");
  NodeKind k = kind == "labeled" ? NodeKind::labeled
               : kind == "white" ? NodeKind::white
               : kind == "black" ? NodeKind::black
                                 : (fail(ErrorCode::invalid_input, "unknown node kind '" + kind + "'"), NodeKind::labeled);
  int label = k == NodeKind::labeled ? get_as<int>(field(j, "label"), "label") : 0;
  int particles = j.contains("particles") ? get_as<int>(j.at("particles"), "particles") : -1;
  int self = m.add_node(k, label, particles);
  if (!j.contains("children")) return self;
  for (const auto& c : j.at("children")) {
    std::string edge = get_as<std::string>(field(c, "edge"), "edge");
    if (edge != "iii" && edge != "flagged") fail(ErrorCode::invalid_input, "unknown edge kind '" + edge + "'");
    bool flagged = edge == "flagged";
    // the child's own children come first in its rotation; the parent edge is moved to the front
    int child = mobile_node_from_json(m, field(c, "node"), depth + 1);
    bool marked = flagged && c.contains("marked") && get_as<bool>(c.at("marked"), "marked");
    int fl = flagged ? get_as<int>(field(c, "flag_left"), "flag_left") : 0;
    int fr = flagged ? get_as<int>(field(c, "flag_right"), "flag_right") : 0;
    m.add_edge(self, child, flagged, marked, fl, fr);
    auto& crot = m.nodes[std::size_t(child)].rot;
    std::rotate(crot.begin(), crot.end() - 1, crot.end());
  }
  return self;
}

}  // namespace detail

/// The tree hangs from the root's labeled vertex when the mobile is rooted, else from node 0.
inline Json mobile_to_json(const Mobile& m, std::optional<BlockMode> mode = std::nullopt) {
  if (m.node_count() == 0) fail(ErrorCode::invalid_input, "empty mobile");
  int top = m.root ? m.root->first : 0;
  Json j = detail::mobile_node_json(m, top, -1);
  if (m.root) j["root_corner"] = m.root->second;
  if (mode) j["mode"] = to_string(*mode);
  return j;
}

inline Mobile mobile_from_json(const Json& j) {
  Mobile m;
  int top = detail::mobile_node_from_json(m, j, 0);
  if (j.contains("root_corner")) {
    int c = detail::get_as<int>(j.at("root_corner"), "root_corner");
    if (m.nodes[std::size_t(top)].kind != NodeKind::labeled) fail(ErrorCode::invalid_input, "root corner must sit at a labeled vertex");
    if (c < 0 || c >= std::max<int>(1, int(m.nodes[std::size_t(top)].rot.size()))) fail(ErrorCode::invalid_input, "root corner out of range");
    m.root = std::pair<int, int>{top, c};
  }
  return m;
}

// ---------------------------------------------------------------------------------------------
// Polynomials and series

inline Json poly_to_json(const AuxPoly& p) {
  Json terms = Json::array();
  auto& reg = VariableRegistry::instance();
  for (const auto& [mono, c] : p.terms()) {
    Json t;
    t["num"] = numerator_of(c).str();
    t["den"] = denominator_of(c).str();
    Json exps = Json::object();
    for (std::size_t i = 0; i < mono.size(); ++i)
      if (mono[i]) exps[reg.name(i)] = int(mono[i]);
    t["exps"] = std::move(exps);
    terms.push_back(std::move(t));
  }
  return terms;
}

inline AuxPoly poly_from_json(const Json& j) {
  if (!j.is_array()) fail(ErrorCode::invalid_input, "polynomial must be a term array");
  std::vector<AuxPoly::Term> terms;
  for (const auto& t : j) {
    Rational c = parse_rational(detail::get_as<std::string>(detail::field(t, "num"), "num") + "/" +
                                detail::get_as<std::string>(detail::field(t, "den"), "den"));
    Monomial m{};
    if (t.contains("exps"))
      for (const auto& [name, e] : t.at("exps").items()) {
        int x = detail::get_as<int>(e, "exps");
        if (x < 0 || x > 255) fail(ErrorCode::invalid_input, "exponent out of range");
        m[var_index(name)] = std::uint8_t(x);
      }
    terms.push_back({m, c});
  }
  return AuxPoly::from_terms(std::move(terms));
}

/// `variable` names the expansion variable; it equals the grading unless the grading is by faces.
inline Json series_to_json(const GSeries& s, const std::string& variable = "g") {
  Json j;
  j["grading"] = s.grading();
  j["order"] = s.order();
  j["variable"] = variable;
  Json cs = Json::array();
  for (int n = 0; n <= s.order(); ++n) {
    if (s[n].is_zero()) continue;
    cs.push_back(Json{{"g_power", n}, {"poly", poly_to_json(s[n])}});
  }
  j["coefficients"] = std::move(cs);
  return j;
}

inline GSeries series_from_json(const Json& j) {
  int order = detail::get_as<int>(detail::field(j, "order"), "order");
  if (order < 0) fail(ErrorCode::invalid_input, "negative order");
  GSeries s(order, j.contains("grading") ? detail::get_as<std::string>(j.at("grading"), "grading") : "faces");
  for (const auto& c : detail::field(j, "coefficients")) {
    int n = detail::get_as<int>(detail::field(c, "g_power"), "g_power");
    if (n < 0 || n > order) fail(ErrorCode::invalid_input, "coefficient beyond the order");
    s[n] += poly_from_json(detail::field(c, "poly"));
  }
  return s;
}

// ---------------------------------------------------------------------------------------------
// Model specifications, with weights as polynomial strings

inline Json spec_to_json(const ModelSpec& s) {
  Json j;
  for (const auto* side : {&s.white, &s.black}) {
    Json w = Json::object();
    for (const auto& [k, p] : *side) w[std::to_string(k)] = p.to_string();
    j[side == &s.white ? "white" : "black"] = std::move(w);
  }
  j["y"] = s.y.to_string();
  j["p"] = s.p;
  Json occ = Json::object();
  for (int i = 1; i <= s.p; ++i) occ["z" + std::to_string(i)] = s.occupancy(i).to_string();
  j["occupancy"] = std::move(occ);
  Json cons = Json::array();
  for (const auto& [k, o] : s.constraints) cons.push_back(Json{{"valence", k}, {"particles", to_string(o)}});
  j["constraints"] = std::move(cons);
  j["mode"] = to_string(s.mode);
  return j;
}

inline ModelSpec spec_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::invalid_input, "model specification must be an object");
  ModelSpec s;
  for (const char* side : {"white", "black"}) {
    if (!j.contains(side)) continue;
    auto& dst = std::string(side) == "white" ? s.white : s.black;
    for (const auto& [k, w] : j.at(side).items()) {
      int v = 0;
      try {
        v = std::stoi(k);
      } catch (const std::exception&) {
        fail(ErrorCode::invalid_input, "face valence '" + k + "' is not an integer");
      }
      dst[v] = parse_poly(detail::get_as<std::string>(w, side));
    }
  }
  if (j.contains("y")) s.y = parse_poly(detail::get_as<std::string>(j.at("y"), "y"));
  if (j.contains("p")) s.p = detail::get_as<int>(j.at("p"), "p");
  if (j.contains("occupancy")) {
    s.z.assign(std::size_t(std::max(s.p, 0)), AuxPoly());
    for (int i = 1; i <= s.p; ++i) s.z[std::size_t(i - 1)] = AuxPoly::var("z" + std::to_string(i));
    for (const auto& [name, w] : j.at("occupancy").items()) {
      int i = 0;
      if (name.size() > 1 && name[0] == 'z') i = std::atoi(name.c_str() + 1);
      if (i < 1 || i > s.p) fail(ErrorCode::invalid_input, "occupancy weight '" + name + "' does not match p");
      s.z[std::size_t(i - 1)] = parse_poly(detail::get_as<std::string>(w, "occupancy"));
    }
  }
  if (j.contains("constraints"))
    for (const auto& c : j.at("constraints")) {
      int k = detail::get_as<int>(detail::field(c, "valence"), "valence");
      s.constraints[k] = parse_occupancy(detail::get_as<std::string>(detail::field(c, "particles"), "particles"));
    }
  if (j.contains("mode")) s.mode = parse_block_mode(detail::get_as<std::string>(j.at("mode"), "mode"));
  s.validate();
  return s;
}

}  // namespace mobiles
