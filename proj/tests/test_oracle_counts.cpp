#include <gtest/gtest.h>

#include "mobiles/models.hpp"
#include "mobiles/oracle_counts.hpp"

using namespace mobiles;
using namespace mobiles::oracle;

namespace {

AuxPoly at(const GSeries& s, int n) { return s.coefficient(n); }

AuxPoly g_power(int n) { return AuxPoly::var("g", unsigned(n)); }

/// Terms of `p` whose degree in the listed variables equals `deg`.
AuxPoly degree_slice(const AuxPoly& p, const std::vector<std::string>& vars, unsigned deg) {
  std::vector<AuxPoly::Term> keep;
  for (const auto& [mono, c] : p.terms()) {
    unsigned d = 0;
    for (const auto& v : vars) d += mono[var_index(v)];
    if (d == deg) keep.push_back({mono, c});
  }
  return AuxPoly::from_terms(keep);
}

Decoration hp_decoration(bool strict) {
  ModelSpec s = hp_triangulation_spec();
  s.y = AuxPoly(-1);
  return decoration_for(s, strict);
}

Decoration forest_decoration() { return decoration_for(quadrangulation_spec(BlockMode::pairs), false); }

Decoration ising_decoration(bool strict) {
  Decoration d;
  d.strict = strict;
  d.p = 1;
  d.mode = BlockMode::directed;
  d.y = AuxPoly(-1);
  d.face_weight = [](Color, int k, int i) {
    if (k == 4 && i == 0) return AuxPoly::var("g");
    if (k == 2 && i == 1) return AuxPoly::var("z1");
    return AuxPoly();
  };
  return d;
}

}  // namespace

TEST(OracleCounts, FaceProfileEnumerationCountsRootedTriangulations) {
  Decoration plain;
  plain.face_weight = [](Color, int, int) { return AuxPoly(1); };
  // one rooted Eulerian triangulation with 2 faces, pointed at any of its 3 vertices
  EXPECT_EQ(count_by_faces({3, 3}, plain).G, AuxPoly(3));
  long eulerian = 0;
  for_each_system_with_faces({3, 3}, [&](const std::vector<int>& s) { eulerian += is_eulerian(PlanarMap::from_sigma(s)); });
  EXPECT_EQ(eulerian, 8);  // 2^2 * 2! labelings fixing dart 0
}

TEST(OracleCounts, HardParticlesUpToFourFaces) {
  auto b = triangulation_hp(4);
  for (int n : {2, 4}) {
    std::vector<int> prof(static_cast<std::size_t>(n), 3);
    Tally relaxed = count_by_faces(prof, hp_decoration(false));
    Tally strict = count_by_faces(prof, hp_decoration(true));
    EXPECT_EQ(relaxed.R, at(b.R, n) * g_power(n)) << n;
    EXPECT_EQ(relaxed.G, at(*b.G, n) * g_power(n)) << n;
    // with any edge distinguished the blockings cancel completely
    EXPECT_EQ(strict.G, relaxed.G) << n;
  }
}

TEST(OracleCounts, ForestUpToTwoVertices) {
  auto b = forest(2);
  ASSERT_TRUE(b.G);
  for (int q : {1, 2}) {
    Tally t = count_via_quadrangulations(q, forest_decoration(), all_edges_doubled);
    EXPECT_EQ(t.R, at(b.R, q) * g_power(q)) << q;
    EXPECT_EQ(t.G, at(*b.G, q) * g_power(q)) << q;
  }
}

TEST(OracleCounts, IsingUpToTwoFaces) {
  auto b = ising(2);
  for (int q : {1, 2}) {
    // spin configurations directly
    Tally spins = count_via_quadrangulations(q, ising_decoration(true), ising_derived);
    EXPECT_EQ(spins.G, at(*b.G, q) * g_power(q)) << q;
    // digon chains with signed blockings; one digon beyond the top z1 degree must cancel
    Tally relaxed = count_via_quadrangulations(q, ising_decoration(false), relaxed_bundles(2 * q + 1));
    EXPECT_EQ(relaxed.R, at(b.R, q) * g_power(q)) << q;
    EXPECT_EQ(relaxed.G, at(*b.G, q) * g_power(q)) << q;
  }
}

TEST(OracleCounts, GenericSystemMatchesAllSmallMaps) {
  std::vector<std::string> vars{"a1", "a2", "a3", "b1", "b2", "b3"};
  for (BlockMode mode : {BlockMode::none, BlockMode::directed, BlockMode::pairs}) {
    ModelSpec s;
    for (int k = 1; k <= 3; ++k) {
      s.white[k] = AuxPoly::var("a" + std::to_string(k));
      s.black[k] = AuxPoly::var("b" + std::to_string(k));
    }
    s.mode = mode;
    auto b = generic_blocked(s, 3, Grading("faces"));
    ASSERT_TRUE(b.G);
    Tally t = count_by_edges(4, decoration_for(s, false));
    for (int F = 1; F <= 3; ++F) {
      EXPECT_EQ(degree_slice(t.R, vars, unsigned(F)), at(b.R, F)) << to_string(mode) << " R faces " << F;
      EXPECT_EQ(degree_slice(t.G, vars, unsigned(F)), at(*b.G, F)) << to_string(mode) << " G faces " << F;
    }
  }
}

TEST(OracleCounts, MaximallyBlockedUpToFourFaces) {
  std::map<int, AuxPoly> a{{2, AuxPoly::var("a2")}, {3, AuxPoly::var("a3")}}, at_{{2, AuxPoly::var("b2")}, {3, AuxPoly::var("b3")}};
  auto b = max_blocked(a, at_, 4);
  ASSERT_TRUE(b.Z);
  Decoration d;
  d.mode = BlockMode::directed;
  d.y = AuxPoly(1);
  d.max_blocked = true;
  d.face_weight = [](Color c, int k, int) { return AuxPoly::var((c == Color::white ? "a" : "b") + std::to_string(k)); };
  std::vector<AuxPoly> by_faces(5);
  for (const auto& prof : face_profiles({2, 3}, 4)) by_faces[prof.size()] += count_by_faces(prof, d).R;
  for (int F = 1; F <= 4; ++F) EXPECT_EQ(by_faces[std::size_t(F)], at(*b.Z, F)) << F;
}

TEST(OracleCounts, OneWayIsForestWithDressedVertexWeight) {
  Decoration one_way = decoration_for(quadrangulation_spec(BlockMode::directed), false);
  AuxPoly dressed = AuxPoly::var("g") * (AuxPoly(1) + AuxPoly::var("y")).pow(2);
  for (int q : {1, 2}) {
    Tally d = count_via_quadrangulations(q, one_way, all_edges_doubled);
    Tally p = count_via_quadrangulations(q, forest_decoration(), all_edges_doubled);
    EXPECT_EQ(d.R, p.R.substitute("g", dressed)) << q;
  }
}

TEST(OracleCounts, CancellationUpToThreeEdges) {
  auto rep = cancellation_check(3, 1);
  EXPECT_GT(rep.configurations, 0);
  EXPECT_EQ(rep.nonzero, 0) << rep.first_failure;
}

TEST(OracleCounts, FourParticleInstanceWithTwelveBlockings) {
  auto inst = find_particle_instance(4, 12);
  ASSERT_TRUE(inst.has_value());
  EXPECT_EQ(inst->configurations, 12);
  EXPECT_EQ(signed_blocking_sum(inst->map, inst->origin, inst->charge, 1), 0);
}

TEST(OracleCounts, ExclusionRespectingConfigurationHasOneTerm) {
  PlanarMap m = with_canonical_even_darts(PlanarMap::from_sigma({5, 2, 1, 4, 3, 0}));
  int n = 0;
  EXPECT_EQ(signed_blocking_sum(m, 0, {1, 0}, 1, &n), 1);
  EXPECT_EQ(n, 1);
}

TEST(OracleCounts, MobileCountsEqualMapCounts) {
  for (BlockMode mode : {BlockMode::none, BlockMode::directed, BlockMode::pairs}) {
    ModelSpec s;
    for (int k = 1; k <= 3; ++k) {
      s.white[k] = AuxPoly::var("a" + std::to_string(k));
      s.black[k] = AuxPoly::var("b" + std::to_string(k));
    }
    s.mode = mode;
    auto rep = mobile_count_equivalence(s, 3);
    EXPECT_TRUE(rep.match) << to_string(mode) << ": " << rep.expected << " vs " << rep.actual;
  }
  ModelSpec hp = hp_triangulation_spec();
  hp.y = AuxPoly(-1);
  auto rep = mobile_count_equivalence(hp, 4);
  EXPECT_TRUE(rep.match) << rep.expected << " vs " << rep.actual;
  ModelSpec empty;
  EXPECT_TRUE(mobile_count_equivalence(empty, 3).match);
}

TEST(OracleCounts, ForestMobilesEqualForestMaps) {
  Decoration d = forest_decoration();
  AuxPoly maps = AuxPoly(1);
  for (int q : {1, 2}) maps += count_via_quadrangulations(q, d, all_edges_doubled).R;
  GSeries mob(6, "faces");
  enumerate_mobiles(quadrangulation_spec(BlockMode::pairs), 6, [&](const EnumeratedMobile& em) { mob[em.size] += em.weight; });
  GSeries g = as_g_series(mob, 2);
  EXPECT_EQ(g[0] + g[1] * g_power(1) + g[2] * g_power(2), maps);
}
