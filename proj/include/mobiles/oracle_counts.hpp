#pragma once

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "mobiles/mobile_enum.hpp"
#include "mobiles/model_spec.hpp"
#include "mobiles/oracle.hpp"

namespace mobiles::oracle {

/// Calls f(sigma) for every connected planar system on sum(degrees) darts whose face
/// permutation phi(d) = sigma(d^1) has exactly the given cycle type.
inline void for_each_system_with_faces(std::vector<int> degrees, const std::function<void(const std::vector<int>&)>& f) {
  int n = 0;
  for (int k : degrees) {
    if (k < 1) fail(ErrorCode::invalid_input, "face degrees must be positive");
    n += k;
  }
  if (n % 2) return;
  if (n / 2 > max_profile_edges) fail(ErrorCode::cap_exceeded, "face profile exceeds the oracle edge cap");
  std::map<int, int> remaining;
  for (int k : degrees) ++remaining[k];
  std::vector<int> phi(static_cast<std::size_t>(n), -1), sigma(static_cast<std::size_t>(n));
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  std::function<void()> next_cycle;
  std::function<void(int, int, int)> extend = [&](int first, int last, int left) {
    if (left == 0) {
      phi[std::size_t(last)] = first;
      next_cycle();
      phi[std::size_t(last)] = -1;
      return;
    }
    for (int d = 0; d < n; ++d) {
      if (used[std::size_t(d)]) continue;
      used[std::size_t(d)] = true;
      phi[std::size_t(last)] = d;
      extend(first, d, left - 1);
      phi[std::size_t(last)] = -1;
      used[std::size_t(d)] = false;
    }
  };
  next_cycle = [&]() {
    int start = 0;
    while (start < n && used[std::size_t(start)]) ++start;
    if (start == n) {
      for (int x = 0; x < n; ++x) sigma[std::size_t(x)] = phi[std::size_t(x ^ 1)];
      if (is_planar_system(sigma)) f(sigma);
      return;
    }
    for (auto& [k, cnt] : remaining) {
      if (!cnt) continue;
      --cnt;
      used[std::size_t(start)] = true;
      extend(start, start, k - 1);
      used[std::size_t(start)] = false;
      ++cnt;
    }
  };
  next_cycle();
}

/// Weighted counts under the two pointing conventions: R (distinguished unblocked edge going
/// from distance m to m+1) and G (any distinguished edge).
struct Tally {
  AuxPoly R;
  AuxPoly G;

  Tally& operator+=(const Tally& o) {
    R += o.R;
    G += o.G;
    return *this;
  }
};

/// How faces, particles and blockings are weighted.
struct Decoration {
  /// Weight of a face of the given color, valence and particle count; zero excludes it.
  std::function<AuxPoly(Color, int, int)> face_weight;
  int p = 0;
  /// Enforce the p-exclusion rule on the particles and allow no blocked edge.
  bool strict = false;
  BlockMode mode = BlockMode::none;
  AuxPoly y = AuxPoly::var("y");
  /// Keep only blockings whose blocked duals form a spanning tree.
  bool max_blocked = false;
};

inline Decoration decoration_for(const ModelSpec& spec, bool strict) {
  Decoration d;
  d.p = spec.p;
  d.strict = strict;
  d.mode = spec.mode;
  d.y = spec.y;
  d.face_weight = [spec](Color c, int k, int i) -> AuxPoly {
    const auto& side = c == Color::white ? spec.white : spec.black;
    auto it = side.find(k);
    if (it == side.end()) return AuxPoly();
    auto con = spec.constraints.find(k);
    Occupancy occ = con == spec.constraints.end() ? Occupancy::any : con->second;
    if ((occ == Occupancy::required && i == 0) || (occ == Occupancy::forbidden && i > 0)) return AuxPoly();
    return it->second * spec.occupancy(i);
  };
  return d;
}

/// Sum over particle configurations, origins and blockings of one map, with the distinguished
/// edge given by a canonical dart taken from `roots`.
inline Tally tally_map(const PlanarMap& m, const Decoration& dec, const std::vector<int>& roots) {
  Tally t;
  if (!is_eulerian(m)) return t;
  auto colors = bicolor_faces(m);
  auto canon = canonical_orientation(m, colors);
  int F = m.faces(), E = m.edges();
  std::vector<std::vector<std::pair<int, AuxPoly>>> options(static_cast<std::size_t>(F));
  for (int f = 0; f < F; ++f) {
    for (int i = 0; i <= dec.p; ++i) {
      AuxPoly w = dec.face_weight(colors[std::size_t(f)], m.face_degree(f), i);
      if (!w.is_zero()) options[std::size_t(f)].push_back({i, w});
    }
    if (options[std::size_t(f)].empty()) return t;
  }
  std::vector<int> pick(static_cast<std::size_t>(F), 0), charge(static_cast<std::size_t>(F));
  for (;;) {
    AuxPoly w(1);
    for (int f = 0; f < F; ++f) {
      const auto& o = options[std::size_t(f)][std::size_t(pick[std::size_t(f)])];
      charge[std::size_t(f)] = o.first;
      w = w * o.second;
    }
    std::vector<bool> violating(static_cast<std::size_t>(E));
    bool any_violation = false;
    for (int e = 0; e < E; ++e) {
      bool v = dec.p > 0 && charge[std::size_t(m.face_of(2 * e))] + charge[std::size_t(m.face_of(2 * e + 1))] > dec.p;
      violating[std::size_t(e)] = v;
      any_violation |= v;
    }
    if (!(dec.strict && any_violation)) {
      for (int o = 0; o < m.vertices(); ++o) {
        std::vector<BlockedConfig> configs;
        if (dec.strict || dec.mode == BlockMode::none)
          configs.push_back(make_config(m, o, {}, dec.mode == BlockMode::none ? BlockMode::none : dec.mode));
        else
          configs = enumerate_blockings(m, o, dec.mode, dec.p > 0 ? violating : std::vector<bool>{});
        for (const auto& c : configs) {
          auto r = try_distances(c);
          if (r.unreachable >= 0) continue;
          int nb = c.blocked_count();
          if (dec.max_blocked && nb != F - 1) continue;
          AuxPoly cw = w * dec.y.pow(unsigned(dec.mode == BlockMode::pairs ? nb / 2 : nb));
          for (int d : roots) {
            if (!canon[std::size_t(d)]) continue;
            t.G += cw;
            if (!c.blocked[std::size_t(d / 2)] && r.dist[std::size_t(m.head_of(d))] == r.dist[std::size_t(m.vertex_of(d))] + 1) t.R += cw;
          }
        }
      }
    }
    int f = 0;
    while (f < F && ++pick[std::size_t(f)] == int(options[std::size_t(f)].size())) pick[std::size_t(f++)] = 0;
    if (f == F) break;
  }
  return t;
}

inline AuxPoly divide_exactly(const AuxPoly& p, const Integer& d) {
  AuxPoly q = p;
  q.scale(Rational(1) / Rational(d));
  for (const auto& [mono, c] : q.terms())
    if (!is_integer(c)) fail(ErrorCode::non_divisible, "weighted labeled count not divisible by " + d.str());
  return q;
}

inline Tally divide_exactly(const Tally& t, const Integer& d) { return Tally{divide_exactly(t.R, d), divide_exactly(t.G, d)}; }

/// Rooted weighted count over all Eulerian maps with the given face degrees.
inline Tally count_by_faces(const std::vector<int>& degrees, const Decoration& dec) {
  Tally t;
  int n = 0;
  for (int k : degrees) n += k;
  if (n % 2) return t;
  for_each_system_with_faces(degrees, [&](const std::vector<int>& s) { t += tally_map(PlanarMap::from_sigma(s), dec, {0}); });
  return divide_exactly(t, rooted_divisor(n / 2));
}

/// Face-degree multisets with entries from `valences` and between 1 and `max_faces` faces.
inline std::vector<std::vector<int>> face_profiles(const std::vector<int>& valences, int max_faces) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (!cur.empty()) out.push_back(cur);
    if (int(cur.size()) == max_faces) return;
    for (std::size_t i = from; i < valences.size(); ++i) {
      cur.push_back(valences[i]);
      rec(i);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

/// Rooted weighted count over every planar map with 1..max_edges edges.
inline Tally count_by_edges(int max_edges, const Decoration& dec) {
  Tally total;
  for (int E = 1; E <= max_edges; ++E) {
    Tally t;
    for_each_planar_sigma(E, [&](const std::vector<int>& s) { t += tally_map(PlanarMap::from_sigma(s), dec, {0}); });
    total += divide_exactly(t, rooted_divisor(E));
  }
  return total;
}

/// Doubles the chosen edges of a map into digons. In the result, quad face f keeps the dart
/// reported in `face_dart[f]`, and digon faces are listed in `digons`.
struct Doubled {
  PlanarMap map;
  std::vector<int> face_dart;  // per original face, a dart of the result on that face
  std::vector<int> digons;     // per doubled edge, a dart of the result on the digon
};

/// Adds `extra[e]` parallel copies next to edge e. Each copy creates one more digon.
inline Doubled multiply_edges(const PlanarMap& q, const std::vector<int>& extra) {
  std::vector<int> sigma = q.sigma_images();
  int n = q.darts();
  std::vector<int> replaced(static_cast<std::size_t>(n), -1), digon_dart;
  for (int e = 0; e < q.edges(); ++e) {
    for (int k = 0; k < extra[std::size_t(e)]; ++k) {
      int a = 2 * e, b = 2 * e + 1, c = n, cb = n + 1;
      n += 2;
      sigma.resize(std::size_t(n));
      int sa = sigma[std::size_t(a)];
      sigma[std::size_t(a)] = c;
      sigma[std::size_t(c)] = sa;
      int pred = -1;
      for (int x = 0; x < n; ++x)
        if (x != cb && sigma[std::size_t(x)] == b) pred = x;
      sigma[std::size_t(pred)] = cb;
      sigma[std::size_t(cb)] = b;
      digon_dart.push_back(b);
      if (k == 0) replaced[std::size_t(b)] = cb;
    }
  }
  Doubled out{PlanarMap::from_sigma(sigma), {}, digon_dart};
  for (int f = 0; f < q.faces(); ++f) {
    int d = q.face_darts(f).front();
    out.face_dart.push_back(replaced[std::size_t(d)] >= 0 ? replaced[std::size_t(d)] : d);
  }
  if (out.map.faces() != q.faces() + int(digon_dart.size())) fail(ErrorCode::internal, "edge doubling lost planarity");
  for (int d : out.digons)
    if (out.map.face_degree(out.map.face_of(d)) != 2) fail(ErrorCode::internal, "edge doubling did not create a digon");
  return out;
}

inline Doubled double_edges(const PlanarMap& q, const std::vector<bool>& doubled) {
  std::vector<int> extra(doubled.begin(), doubled.end());
  return multiply_edges(q, extra);
}

/// Relabels so that the face on the right of dart 0 gets the color `want` would give it.
inline PlanarMap orient_root(const PlanarMap& m, const std::vector<Color>& want) {
  if (want[std::size_t(m.face_of(0))] == Color::black) return m;
  std::vector<int> perm(static_cast<std::size_t>(m.darts()));
  std::iota(perm.begin(), perm.end(), 0);
  std::swap(perm[0], perm[1]);
  return m.relabeled(perm);
}

/// Quadrangulations with q faces, summed over every distinguished edge of the derived
/// Eulerian map. `derive` returns, for a labeled quadrangulation, the derived maps (already
/// rooted so that dart 0 sits on a black face) with a face weight prefactor.
inline Tally count_via_quadrangulations(int q, const Decoration& dec,
                                        const std::function<std::vector<std::pair<PlanarMap, AuxPoly>>(const PlanarMap&)>& derive) {
  Tally t;
  int E = 2 * q;
  if (E > max_oracle_edges) fail(ErrorCode::cap_exceeded, "quadrangulation route limited to 2 faces");
  for_each_planar_sigma(E, [&](const std::vector<int>& s) {
    PlanarMap quad = PlanarMap::from_sigma(s);
    for (int f = 0; f < quad.faces(); ++f)
      if (quad.face_degree(f) != 4) return;
    for (const auto& [m, pre] : derive(quad)) {
      std::vector<int> roots(static_cast<std::size_t>(m.darts()));
      std::iota(roots.begin(), roots.end(), 0);
      Tally x = tally_map(m, dec, roots);
      t.R += x.R * pre;
      t.G += x.G * pre;
    }
  });
  Integer div = factorial(unsigned(E));
  for (int i = 0; i < E; ++i) div *= 2;
  return divide_exactly(t, div);
}

/// Every quadrangulation edge replaced by a black digon; quads white with weight g.
inline std::vector<std::pair<PlanarMap, AuxPoly>> all_edges_doubled(const PlanarMap& quad) {
  Doubled d = double_edges(quad, std::vector<bool>(std::size_t(quad.edges()), true));
  std::vector<Color> want(static_cast<std::size_t>(d.map.faces()), Color::white);
  for (int x : d.digons) want[std::size_t(d.map.face_of(x))] = Color::black;
  return {{orient_root(d.map, want), AuxPoly(1)}};
}

/// Quadrangulations with spins: a digon between faces of equal spin, up spins black.
inline std::vector<std::pair<PlanarMap, AuxPoly>> ising_derived(const PlanarMap& quad) {
  std::vector<std::pair<PlanarMap, AuxPoly>> out;
  int F = quad.faces();
  for (unsigned spins = 0; spins < (1u << F); ++spins) {
    std::vector<bool> same(static_cast<std::size_t>(quad.edges()));
    for (int e = 0; e < quad.edges(); ++e)
      same[std::size_t(e)] = ((spins >> quad.face_of(2 * e)) & 1) == ((spins >> quad.face_of(2 * e + 1)) & 1);
    Doubled d = double_edges(quad, same);
    std::vector<Color> want(static_cast<std::size_t>(d.map.faces()));
    for (int f = 0; f < F; ++f) want[std::size_t(d.map.face_of(d.face_dart[std::size_t(f)]))] = (spins >> f) & 1 ? Color::black : Color::white;
    for (int x : d.digons) {
      int f = d.map.face_of(x), nb = d.map.face_of(x ^ 1);
      // the digon's neighbor across dart x is a quad face
      want[std::size_t(f)] = want[std::size_t(nb)] == Color::black ? Color::white : Color::black;
    }
    PlanarMap m = orient_root(d.map, want);
    if (bicolor_faces(m) != (want[std::size_t(d.map.face_of(0))] == Color::black ? want : bicolor_faces(m)))
      fail(ErrorCode::internal, "spin coloring is not a proper face coloring");
    out.push_back({m, AuxPoly(1)});
  }
  return out;
}

/// Eulerian maps made of the quadrangulation's faces and chains of digons: every edge becomes a
/// bundle of parallel edges, at most `max_digons` extra edges in total. Both face colorings are
/// returned.
inline auto relaxed_bundles(int max_digons) {
  return [max_digons](const PlanarMap& quad) {
    std::vector<std::pair<PlanarMap, AuxPoly>> out;
    std::vector<int> extra(static_cast<std::size_t>(quad.edges()), 0);
    std::function<void(int, int)> rec = [&](int e, int left) {
      if (e == quad.edges()) {
        PlanarMap m = multiply_edges(quad, extra).map;
        if (!is_eulerian(m)) return;
        std::vector<int> perm(static_cast<std::size_t>(m.darts()));
        std::iota(perm.begin(), perm.end(), 0);
        std::swap(perm[0], perm[1]);
        out.push_back({m, AuxPoly(1)});
        out.push_back({m.relabeled(perm), AuxPoly(1)});
        return;
      }
      for (int k = 0; k <= left; ++k) {
        extra[std::size_t(e)] = k;
        rec(e + 1, left - k);
      }
      extra[std::size_t(e)] = 0;
    };
    rec(0, max_digons);
    return out;
  };
}

/// Signed sum over restricted valid blockings for one particle configuration; zero whenever the
/// configuration violates p-exclusion.
inline Integer signed_blocking_sum(const PlanarMap& m, int origin, const std::vector<int>& charge, int p,
                                   int* count = nullptr) {
  std::vector<bool> violating(static_cast<std::size_t>(m.edges()));
  for (int e = 0; e < m.edges(); ++e)
    violating[std::size_t(e)] = charge[std::size_t(m.face_of(2 * e))] + charge[std::size_t(m.face_of(2 * e + 1))] > p;
  auto configs = enumerate_blockings(m, origin, BlockMode::directed, violating);
  if (count) *count = int(configs.size());
  Integer s = 0;
  for (const auto& c : configs) s += c.blocked_count() % 2 ? -1 : 1;
  return s;
}

struct CancellationReport {
  long configurations = 0;  // (map, origin, particles) triples that violate exclusion
  long nonzero = 0;
  std::string first_failure;
};

/// Exhaustive cancellation check over Eulerian maps with at most max_edges edges and every
/// particle configuration (at most p per face) that violates the p-exclusion rule.
inline CancellationReport cancellation_check(int max_edges, int p = 1) {
  CancellationReport rep;
  for (int E = 1; E <= max_edges; ++E)
    for (const auto& m : distinct_maps(E, is_eulerian)) {
      int F = m.faces();
      std::vector<int> charge(static_cast<std::size_t>(F), 0);
      for (;;) {
        bool violates = false;
        for (int e = 0; e < m.edges(); ++e)
          violates |= charge[std::size_t(m.face_of(2 * e))] + charge[std::size_t(m.face_of(2 * e + 1))] > p;
        if (violates)
          for (int o = 0; o < m.vertices(); ++o) {
            ++rep.configurations;
            if (signed_blocking_sum(m, o, charge, p) != 0 && !rep.nonzero++) rep.first_failure = "E=" + std::to_string(E) + " origin " + std::to_string(o);
          }
        int f = 0;
        while (f < F && ++charge[std::size_t(f)] > p) charge[std::size_t(f++)] = 0;
        if (f == F) break;
      }
    }
  return rep;
}

/// A pointed Eulerian map with particles and its number of restricted valid blockings.
struct ParticleInstance {
  PlanarMap map;
  int origin = 0;
  std::vector<int> charge;
  int configurations = 0;
};

/// First instance (in enumeration order) with `particles` single particles, violating
/// 1-exclusion, that admits exactly `target` restricted valid blockings.
inline std::optional<ParticleInstance> find_particle_instance(int particles, int target, int max_edges = 5) {
  for (int E = 1; E <= max_edges; ++E)
    for (const auto& m : distinct_maps(E, is_eulerian)) {
      int F = m.faces();
      if (F < particles) continue;
      for (unsigned mask = 0; mask < (1u << F); ++mask) {
        if (std::popcount(mask) != particles) continue;
        std::vector<int> charge(static_cast<std::size_t>(F));
        for (int f = 0; f < F; ++f) charge[std::size_t(f)] = (mask >> f) & 1;
        for (int o = 0; o < m.vertices(); ++o) {
          int n = 0;
          Integer s = signed_blocking_sum(m, o, charge, 1, &n);
          if (n == target && s == 0) return ParticleInstance{m, o, charge, n};
        }
      }
    }
  return std::nullopt;
}

struct EquivalenceReport {
  AuxPoly expected;  // maps under the R convention, plus 1 for the vertex map
  AuxPoly actual;    // rooted unrestricted mobiles
  bool match = false;
};

/// Weighted count of mobiles with at most `max_faces` nodes against the map oracle over every face
/// profile of the model with that many faces.
inline EquivalenceReport mobile_count_equivalence(const ModelSpec& spec, int max_faces) {
  std::vector<int> valences;
  for (const auto* side : {&spec.white, &spec.black})
    for (const auto& [k, w] : *side)
      if (!w.is_zero() && std::find(valences.begin(), valences.end(), k) == valences.end()) valences.push_back(k);
  std::sort(valences.begin(), valences.end());
  EquivalenceReport r;
  r.expected = AuxPoly(1);
  Decoration dec = decoration_for(spec, false);
  for (const auto& prof : face_profiles(valences, max_faces)) {
    int darts = 0;
    for (int k : prof) darts += k;
    if (darts % 2) continue;
    if (darts / 2 > max_profile_edges) fail(ErrorCode::cap_exceeded, "face profile beyond the oracle's edge cap");
    r.expected += count_by_faces(prof, dec).R;
  }
  enumerate_mobiles(spec, max_faces, [&](const EnumeratedMobile& em) { r.actual += em.weight; });
  r.match = r.expected == r.actual;
  return r;
}

}  // namespace mobiles::oracle
