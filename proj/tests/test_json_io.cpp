#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "mobiles/checks.hpp"
#include "mobiles/json_io.hpp"
#include "mobiles/oracle.hpp"

using namespace mobiles;

namespace {

template <class F>
void for_each_small_config(int max_edges, BlockMode mode, F f) {
  for (int E = 1; E <= max_edges; ++E)
    for (const auto& m0 : oracle::distinct_maps(E, is_eulerian)) {
      PlanarMap m = with_canonical_even_darts(m0);
      if (m.vertices() < 2) continue;
      for (int o = 0; o < m.vertices(); ++o)
        for (const auto& c : oracle::enumerate_blockings(m, o, mode)) f(c);
    }
}

/// Same decorated map with darts shuffled: edges permuted and each edge possibly flipped. The
/// dart landing on 0 stays canonical, since dart 0 fixes the face colors.
BlockedConfig scrambled(const BlockedConfig& c, std::mt19937_64& rng) {
  int E = c.map.edges();
  std::vector<int> edge(static_cast<std::size_t>(E));
  for (int e = 0; e < E; ++e) edge[std::size_t(e)] = e;
  std::shuffle(edge.begin(), edge.end(), rng);
  std::vector<int> perm(static_cast<std::size_t>(2 * E));
  std::vector<bool> blocked(static_cast<std::size_t>(E));
  for (int e = 0; e < E; ++e) {
    int flip = edge[std::size_t(e)] == 0 ? 0 : int(rng() & 1);
    perm[std::size_t(2 * e)] = 2 * edge[std::size_t(e)] + flip;
    perm[std::size_t(2 * e + 1)] = 2 * edge[std::size_t(e)] + 1 - flip;
    blocked[std::size_t(edge[std::size_t(e)])] = c.blocked[std::size_t(e)];
  }
  PlanarMap m = c.map.relabeled(perm);
  int origin = m.vertex_of(perm[std::size_t(c.map.vertex_darts(c.origin).front())]);
  return BlockedConfig{m, origin, blocked, c.mode};
}

}  // namespace

TEST(JsonIo, MapRoundTripKeepsDecoratedMap) {
  int n = 0;
  for (BlockMode mode : {BlockMode::directed, BlockMode::pairs})
    for_each_small_config(3, mode, [&](const BlockedConfig& c) {
      ++n;
      Json j = parse_json(map_to_json(c).dump());
      BlockedConfig back = map_from_json(j);
      EXPECT_EQ(back.mode, c.mode);
      EXPECT_EQ(config_key(back), config_key(c));
    });
  EXPECT_GT(n, 20);
}

TEST(JsonIo, MapInputIsReorientedAndOneBased) {
  // two glued triangles written with the odd dart of every edge first
  Json j = parse_json(R"({"darts":6,"sigma":[4,5,6,1,2,3],"blocked_darts":[2],"origin_vertex":2})");
  BlockedConfig c = map_from_json(j);
  EXPECT_EQ(c.map.vertices(), 3);
  EXPECT_TRUE(c.blocked[0]);
  EXPECT_EQ(c.blocked_count(), 1);
  auto colors = bicolor_faces(c.map);
  for (int d = 0; d < c.map.darts(); d += 2) EXPECT_EQ(colors[std::size_t(c.map.face_of(d))], Color::black);
}

TEST(JsonIo, MapInputErrors) {
  auto code = [](const char* text) {
    try {
      map_from_json(parse_json(text));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::internal;
  };
  EXPECT_EQ(code("{\"darts\":4"), ErrorCode::invalid_input);
  EXPECT_EQ(code(R"({"darts":4,"sigma":[2,1]})"), ErrorCode::invalid_input);
  EXPECT_EQ(code(R"({"darts":2,"sigma":["a","b"]})"), ErrorCode::invalid_input);
  EXPECT_EQ(code(R"({"darts":4,"sigma":[1,3,4,2]})"), ErrorCode::not_eulerian);
  EXPECT_EQ(code(R"({"darts":4,"sigma":[1,2,3,4]})"), ErrorCode::not_connected);
  EXPECT_EQ(code(R"({"darts":2,"sigma":[2,1],"origin_vertex":3})"), ErrorCode::invalid_input);
  EXPECT_EQ(code(R"({"darts":2,"sigma":[2,1],"blocked_darts":[7]})"), ErrorCode::invalid_input);
}

TEST(JsonIo, MobileRoundTripDecodesToTheSameMap) {
  int n = 0;
  for (BlockMode mode : {BlockMode::directed, BlockMode::pairs})
    for_each_small_config(3, mode, [&](const BlockedConfig& c) {
      ++n;
      Mobile mob = to_mobile(c);
      Json j = parse_json(mobile_to_json(mob, mode).dump());
      Mobile back = mobile_from_json(j);
      EXPECT_EQ(back.node_count(), mob.node_count());
      EXPECT_EQ(back.edge_count(), mob.edge_count());
      EXPECT_TRUE(check_well_labeled(back).ok());
      EXPECT_EQ(config_key(from_mobile(back, mode)), config_key(c));
      EXPECT_EQ(mobile_to_json(back, mode), j);
    });
  EXPECT_GT(n, 20);
}

TEST(JsonIo, MobileInputErrors) {
  EXPECT_THROW(mobile_from_json(parse_json(R"({"kind":"grey"})")), Error);
  EXPECT_THROW(mobile_from_json(parse_json(R"({"kind":"labeled"})")), Error);
  EXPECT_THROW(mobile_from_json(parse_json(R"({"kind":"white","children":[{"edge":"loop","node":{"kind":"black"}}]})")), Error);
  EXPECT_THROW(mobile_from_json(parse_json(R"({"kind":"white","root_corner":0})")), Error);
  // not well labeled: the only labels differ by two around a white node
  Mobile m = mobile_from_json(parse_json(
      R"({"kind":"white","children":[{"edge":"iii","node":{"kind":"labeled","label":1}},{"edge":"iii","node":{"kind":"labeled","label":3}}]})"));
  EXPECT_FALSE(check_well_labeled(m).ok());
}

TEST(JsonIo, CanonicalConfigIgnoresLabeling) {
  std::mt19937_64 rng(99);
  int n = 0;
  for_each_small_config(3, BlockMode::directed, [&](const BlockedConfig& c) {
    BlockedConfig canon = canonical_config(c);
    EXPECT_EQ(config_key(canon), config_key(c));
    for (int rep = 0; rep < 3; ++rep) {
      BlockedConfig s = scrambled(c, rng);
      s = map_from_json(map_to_json(s));
      EXPECT_EQ(map_to_json(canonical_config(s)), map_to_json(canon));
      ++n;
    }
  });
  EXPECT_GT(n, 50);
}

TEST(JsonIo, SeriesRoundTrip) {
  GSeries s = Grading("g").weight(parse_poly("1 + 3*g + 6*g^2*(3+5*y) - 1/7*g^3*z1^2"), 4);
  Json j = parse_json(series_to_json(s).dump());
  EXPECT_EQ(j["coefficients"][2]["g_power"], 2);
  EXPECT_EQ(series_from_json(j), s);
  EXPECT_EQ(series_from_json(j).grading(), "g");
  // arbitrary precision survives as decimal strings
  GSeries big(1, "g");
  big[1] = AuxPoly(Rational(factorial(40), 3));
  EXPECT_EQ(series_from_json(series_to_json(big)), big);
  EXPECT_THROW(series_from_json(parse_json(R"({"order":1,"coefficients":[{"g_power":3,"poly":[]}]})")), Error);
}

TEST(JsonIo, ModelSpecRoundTrip) {
  Json j = parse_json(
      R"({"white":{"4":"g"},"black":{"2":"1"},"y":"-1","p":1,"occupancy":{"z1":"z1"},"constraints":[{"valence":2,"particles":"required"}],"mode":"directed"})");
  ModelSpec s = spec_from_json(j);
  EXPECT_EQ(s.white.at(4), AuxPoly::var("g"));
  EXPECT_EQ(s.black.at(2), AuxPoly(1));
  EXPECT_EQ(s.y, AuxPoly(-1));
  EXPECT_EQ(s.p, 1);
  EXPECT_EQ(s.constraints.at(2), Occupancy::required);
  ModelSpec again = spec_from_json(spec_to_json(s));
  EXPECT_EQ(spec_to_json(again), spec_to_json(s));
  EXPECT_THROW(spec_from_json(parse_json(R"({"white":{"x":"g"}})")), Error);
  EXPECT_THROW(spec_from_json(parse_json(R"({"p":1,"occupancy":{"z2":"1"}})")), Error);
  EXPECT_THROW(spec_from_json(parse_json(R"({"mode":"pairs","p":1})")), Error);
}

TEST(Checks, PerturbationIsCaught) {
  checks::CheckOptions opt;
  opt.identity_order = 4;
  EXPECT_TRUE(checks::identities_suite(opt).passed());
  opt.perturb = true;
  auto r = checks::identities_suite(opt);
  ASSERT_FALSE(r.passed());
  EXPECT_NE(r.first_failure()->name.find("power 1"), std::string::npos);
  opt.max_edges = 2;
  auto rt = checks::roundtrip_suite(opt);
  EXPECT_FALSE(rt.passed());
  EXPECT_THROW(checks::run_suite("everything", opt), Error);
}
