#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "mobiles/aux_poly.hpp"
#include "mobiles/planar_map.hpp"

namespace mobiles::oracle {

inline constexpr int max_oracle_edges = 5;
// enumeration by face profile only visits one cycle type of phi, which affords one more edge
inline constexpr int max_profile_edges = 6;

/// Fast check that (alpha = d^1, sigma) is connected and planar, without building a PlanarMap.
inline bool is_planar_system(const std::vector<int>& sigma) {
  int n = int(sigma.size());
  if (n > 2 * max_profile_edges) fail(ErrorCode::cap_exceeded, "rotation system too large for the oracle");
  int seen[2 * max_profile_edges + 2] = {};
  int V = 0, F = 0;
  for (int d = 0; d < n; ++d)
    if (!(seen[d] & 1)) {
      ++V;
      for (int x = d; !(seen[x] & 1); x = sigma[std::size_t(x)]) seen[x] |= 1;
    }
  for (int d = 0; d < n; ++d)
    if (!(seen[d] & 2)) {
      ++F;
      for (int x = d; !(seen[x] & 2); x = sigma[std::size_t(x ^ 1)]) seen[x] |= 2;
    }
  if (V - n / 2 + F != 2) return false;
  // connectivity: union over sigma and alpha
  int stack[2 * max_profile_edges + 2], top = 0, count = 1;
  bool vis[2 * max_profile_edges + 2] = {};
  vis[0] = true;
  stack[top++] = 0;
  while (top) {
    int d = stack[--top];
    for (int x : {sigma[std::size_t(d)], d ^ 1})
      if (!vis[x]) vis[x] = true, ++count, stack[top++] = x;
  }
  return count == n;
}

/// Calls f(sigma) for every connected planar rotation system on 2E darts with alpha = d^1.
inline void for_each_planar_sigma(int E, const std::function<void(const std::vector<int>&)>& f) {
  if (E < 1 || E > max_oracle_edges) fail(ErrorCode::cap_exceeded, "oracle is limited to 1..5 edges");
  std::vector<int> sigma(std::size_t(2 * E));
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    if (is_planar_system(sigma)) f(sigma);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
}

/// Relabelings fixing dart 0 and commuting with alpha.
inline Integer rooted_divisor(int E) {
  Integer r = factorial(unsigned(E - 1));
  for (int i = 0; i < E - 1; ++i) r *= 2;
  return r;
}

/// Number of rooted planar maps with E edges passing `filter`, by exact division of the
/// labeled count.
inline Integer count_rooted_maps(int E, const std::function<bool(const PlanarMap&)>& filter = {}) {
  Integer labeled = 0;
  for_each_planar_sigma(E, [&](const std::vector<int>& s) {
    if (!filter || filter(PlanarMap::from_sigma(s))) ++labeled;
  });
  Integer div = rooted_divisor(E);
  if (labeled % div != 0) fail(ErrorCode::non_divisible, "labeled count not divisible by relabelings");
  return labeled / div;
}

/// One representative per isomorphism class (orientation preserving) of planar maps with
/// E edges passing `filter`.
inline std::vector<PlanarMap> distinct_maps(int E, const std::function<bool(const PlanarMap&)>& filter = {}) {
  std::set<std::vector<int>> seen_rooted;
  std::set<std::vector<int>> seen;
  std::vector<PlanarMap> out;
  for_each_planar_sigma(E, [&](const std::vector<int>& s) {
    PlanarMap m = PlanarMap::from_sigma(s);
    if (filter && !filter(m)) return;
    if (!seen_rooted.insert(canonical_form(m, 0)).second) return;
    auto key = unrooted_key(m);
    if (seen.insert(key).second) out.push_back(m);
  });
  return out;
}

/// Every blocked configuration on (map, origin) allowed by the mode and the connectivity
/// constraint.
inline std::vector<BlockedConfig> enumerate_blockings(const PlanarMap& m, int origin, BlockMode mode,
                                                      const std::vector<bool>& blockable = {}) {
  std::vector<BlockedConfig> out;
  int E = m.edges();
  if (E > 20) fail(ErrorCode::cap_exceeded, "too many edges for subset enumeration");
  for (unsigned mask = 0; mask < (1u << E); ++mask) {
    std::vector<bool> b(static_cast<std::size_t>(E));
    bool allowed = true;
    for (int e = 0; e < E; ++e) {
      b[std::size_t(e)] = (mask >> e) & 1;
      if (b[std::size_t(e)] && !blockable.empty() && !blockable[std::size_t(e)]) allowed = false;
    }
    if (!allowed) continue;
    BlockedConfig c = make_config(m, origin, b, mode);
    if (validate_blocking(c).valid) out.push_back(std::move(c));
  }
  return out;
}

}  // namespace mobiles::oracle
