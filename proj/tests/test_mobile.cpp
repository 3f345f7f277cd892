#include <gtest/gtest.h>

#include "mobiles/mobile.hpp"
#include "mobiles/oracle.hpp"

using namespace mobiles;

namespace {

PlanarMap glued_triangles() { return PlanarMap::from_sigma({5, 2, 1, 4, 3, 0}); }

struct RoundTripStats {
  int configs = 0;
  int failures = 0;
  std::string first_failure;
};

RoundTripStats round_trip_all(int max_edges, BlockMode mode) {
  RoundTripStats st;
  for (int E = 1; E <= max_edges; ++E)
    for (const auto& m0 : oracle::distinct_maps(E, is_eulerian)) {
      PlanarMap m = with_canonical_even_darts(m0);
      if (m.vertices() < 2) continue;
      for (int o = 0; o < m.vertices(); ++o)
        for (const auto& c : oracle::enumerate_blockings(m, o, mode)) {
          ++st.configs;
          std::string why;
          try {
            Mobile mob = to_mobile(c);
            auto diag = check_well_labeled(mob);
            if (!diag.ok()) why = "not well labeled: " + diag.problems.front();
            else if (mob.node_count() != m.faces() + m.vertices() - 1 || mob.edge_count() != m.edges())
              why = "wrong node or edge count";
            else {
              BlockedConfig back = from_mobile(mob, mode);
              if (config_key(back) != config_key(c)) why = "decoded configuration differs";
            }
          } catch (const Error& e) {
            why = std::string(to_string(e.code())) + ": " + e.what();
          }
          if (!why.empty()) {
            if (!st.failures++) {
              st.first_failure = why + " [sigma";
              for (int s : m.sigma_images()) st.first_failure += " " + std::to_string(s);
              st.first_failure += " origin " + std::to_string(o) + " blocked";
              for (int e = 0; e < m.edges(); ++e)
                if (c.blocked[std::size_t(e)]) st.first_failure += " " + std::to_string(e);
              st.first_failure += "]";
            }
          }
        }
    }
  return st;
}

}  // namespace

TEST(Mobile, SingleVertexIsDegenerate) {
  PlanarMap loop = PlanarMap::from_sigma({1, 0});
  try {
    to_mobile(make_config(loop, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate_map);
  }
}

TEST(Mobile, DoubledEdge) {
  // two vertices joined by two parallel edges: one black and one white digon
  PlanarMap digon = with_canonical_even_darts(PlanarMap::from_sigma({2, 3, 0, 1}));
  Mobile mob = to_mobile(make_config(digon, digon.vertex_of(0)));
  EXPECT_EQ(mob.node_count(), 3);
  EXPECT_EQ(mob.edge_count(), 2);
  EXPECT_TRUE(check_well_labeled(mob).ok());
  EXPECT_EQ(mob.labeled_count(), 1);
}

TEST(Mobile, GluedTrianglesLabels) {
  PlanarMap m = with_canonical_even_darts(glued_triangles());
  Mobile mob = to_mobile(make_config(m, 0));
  std::vector<int> labels;
  for (const auto& n : mob.nodes)
    if (n.kind == NodeKind::labeled) labels.push_back(n.label);
  std::sort(labels.begin(), labels.end());
  EXPECT_EQ(labels, (std::vector<int>{1, 2}));
  EXPECT_TRUE(check_well_labeled(mob).ok());
  for (int x = 0; x < mob.node_count(); ++x)
    if (mob.nodes[std::size_t(x)].kind == NodeKind::black) {
      EXPECT_EQ(mob.black_valence(x), 3);
    }
}

TEST(Mobile, BlackValenceEqualsFaceDegree) {
  for (int E = 1; E <= 4; ++E)
    for (const auto& m0 : oracle::distinct_maps(E, is_eulerian)) {
      PlanarMap m = with_canonical_even_darts(m0);
      if (m.vertices() < 2) continue;
      auto colors = bicolor_faces(m);
      for (int o = 0; o < m.vertices(); ++o)
        for (const auto& c : oracle::enumerate_blockings(m, o, BlockMode::directed)) {
          Mobile mob = to_mobile(c);
          // face nodes are added first, in face order
          for (int f = 0; f < m.faces(); ++f) {
            if (colors[std::size_t(f)] != Color::black) continue;
            EXPECT_EQ(mob.black_valence(f), m.face_degree(f));
          }
        }
    }
}

TEST(Mobile, ContourSatisfiesRatchet) {
  PlanarMap m = with_canonical_even_darts(glued_triangles());
  Mobile mob = to_mobile(make_config(m, 0));
  auto w = contour_word(mob);
  EXPECT_NO_THROW(check_ratchet(w));
  EXPECT_NO_THROW(successors(w));
}

TEST(Mobile, RatchetViolationIsReported) {
  std::vector<Token> w{Token{true, 3, 0, 0, -1}, Token{true, 1, 1, 0, -1}};
  try {
    check_ratchet(w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ratchet_violated);
  }
}

TEST(Mobile, IllLabeledMobileIsRejected) {
  Mobile mob;
  int w = mob.add_node(NodeKind::white);
  int a = mob.add_node(NodeKind::labeled, 1);
  int b = mob.add_node(NodeKind::labeled, 3);
  mob.add_edge(w, a, false);
  mob.add_edge(w, b, false);
  EXPECT_FALSE(check_well_labeled(mob).ok());
  try {
    from_mobile(mob);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_well_labeled);
  }
}

TEST(Mobile, RoundTripDirectedUpToFourEdges) {
  auto st = round_trip_all(4, BlockMode::directed);
  EXPECT_GT(st.configs, 0);
  EXPECT_EQ(st.failures, 0) << st.first_failure;
}

TEST(Mobile, RoundTripPairsUpToFourEdges) {
  auto st = round_trip_all(4, BlockMode::pairs);
  EXPECT_GT(st.configs, 0);
  EXPECT_EQ(st.failures, 0) << st.first_failure;
}

TEST(Mobile, RoundTripUnblockedFiveEdges) {
  auto st = round_trip_all(5, BlockMode::none);
  EXPECT_EQ(st.failures, 0) << st.first_failure;
}
