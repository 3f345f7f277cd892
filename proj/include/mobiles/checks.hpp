#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "mobiles/json_io.hpp"
#include "mobiles/mobile.hpp"
#include "mobiles/models.hpp"
#include "mobiles/oracle.hpp"
#include "mobiles/oracle_counts.hpp"

namespace mobiles::checks {

struct CheckItem {
  std::string name;
  std::string expected;
  std::string actual;
  bool match = false;
  Json counterexample;  // null unless the item failed on a concrete object
};

struct CheckReport {
  std::string suite;
  std::vector<CheckItem> items;

  bool passed() const {
    return std::all_of(items.begin(), items.end(), [](const CheckItem& i) { return i.match; });
  }
  const CheckItem* first_failure() const {
    for (const auto& i : items)
      if (!i.match) return &i;
    return nullptr;
  }
};

struct CheckOptions {
  int max_edges = 4;         // round trip
  int cancellation_edges = 3;
  int identity_order = 8;
  /// Test hook: shifts the first expected value of the suite by one.
  bool perturb = false;
};

namespace detail {

class Recorder {
 public:
  Recorder(std::string suite, bool perturb) : perturb_(perturb) { rep_.suite = std::move(suite); }

  void poly(const std::string& name, AuxPoly expected, const AuxPoly& actual) {
    if (take_perturbation()) expected += AuxPoly(1);
    rep_.items.push_back(CheckItem{name, expected.to_string(), actual.to_string(), expected == actual, nullptr});
  }

  /// Reports the first differing coefficient, or the order when the series agree.
  void series(const std::string& name, GSeries expected, const GSeries& actual) {
    if (take_perturbation() && expected.order() >= 1) expected[1] += AuxPoly(1);
    int N = std::max(expected.order(), actual.order());
    for (int n = 0; n <= N; ++n)
      if (expected.coefficient(n) != actual.coefficient(n)) {
        rep_.items.push_back(CheckItem{name + " at power " + std::to_string(n), expected.coefficient(n).to_string(),
                                       actual.coefficient(n).to_string(), false, nullptr});
        return;
      }
    std::string same = "agree to order " + std::to_string(N);
    rep_.items.push_back(CheckItem{name, same, same, true, nullptr});
  }

  void count(const std::string& name, long expected, long actual, Json counterexample = nullptr) {
    if (take_perturbation()) ++expected;
    rep_.items.push_back(CheckItem{name, std::to_string(expected), std::to_string(actual), expected == actual, std::move(counterexample)});
  }

  void flag(const std::string& name, bool ok) {
    if (take_perturbation()) ok = !ok;
    rep_.items.push_back(CheckItem{name, "true", ok ? "true" : "false", ok, nullptr});
  }

  CheckReport done() { return std::move(rep_); }

 private:
  bool take_perturbation() {
    bool p = perturb_;
    perturb_ = false;
    return p;
  }
  CheckReport rep_;
  bool perturb_;
};

inline AuxPoly g_power(int n) { return AuxPoly::var("g", unsigned(n)); }

}  // namespace detail

// ---------------------------------------------------------------------------------------------
// Decorations for the oracle under both pointing conventions

/// Hard particles on Eulerian triangulations at y = -1.
inline oracle::Decoration hp_decoration(bool strict) {
  ModelSpec s = hp_triangulation_spec();
  s.y = AuxPoly(-1);
  return oracle::decoration_for(s, strict);
}

/// Ising spins as quadrangulations with bivalent particle faces standing for unlike neighbors.
inline oracle::Decoration ising_decoration(bool strict) {
  oracle::Decoration d;
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

inline oracle::Decoration forest_decoration() { return oracle::decoration_for(quadrangulation_spec(BlockMode::pairs), false); }

// ---------------------------------------------------------------------------------------------
// Suites

struct RoundTripCount {
  long configurations = 0;
  long failures = 0;
  std::string why;
  Json counterexample;
};

/// Encodes and decodes every valid blocking of every pointed Eulerian map with `edges` edges.
inline RoundTripCount round_trip(int edges, BlockMode mode) {
  RoundTripCount st;
  for (const auto& m0 : oracle::distinct_maps(edges, is_eulerian)) {
    PlanarMap m = with_canonical_even_darts(m0);
    if (m.vertices() < 2) continue;
    for (int o = 0; o < m.vertices(); ++o)
      for (const auto& c : oracle::enumerate_blockings(m, o, mode)) {
        ++st.configurations;
        std::string why;
        try {
          Mobile mob = to_mobile(c);
          auto diag = check_well_labeled(mob);
          if (!diag.ok())
            why = "not well labeled: " + diag.problems.front();
          else if (mob.node_count() != m.faces() + m.vertices() - 1 || mob.edge_count() != m.edges())
            why = "wrong node or edge count";
          else if (config_key(from_mobile(mob, mode)) != config_key(c))
            why = "decoded configuration differs";
        } catch (const Error& e) {
          why = e.what();
        }
        if (!why.empty() && !st.failures++) {
          st.why = why;
          st.counterexample = map_to_json(c);
        }
      }
  }
  return st;
}

inline CheckReport roundtrip_suite(const CheckOptions& opt) {
  detail::Recorder rec("roundtrip", opt.perturb);
  for (BlockMode mode : {BlockMode::directed, BlockMode::pairs})
    for (int E = 1; E <= opt.max_edges; ++E) {
      auto st = round_trip(E, mode);
      rec.count(to_string(mode) + " edges " + std::to_string(E) + (st.failures ? " (" + st.why + ")" : ""), st.configurations,
                st.configurations - st.failures, st.counterexample);
    }
  return rec.done();
}

inline CheckReport oracle_series_suite(const CheckOptions& opt) {
  detail::Recorder rec("oracle-series", opt.perturb);
  auto fo = forest(2);
  for (int q : {1, 2}) {
    auto t = oracle::count_via_quadrangulations(q, forest_decoration(), oracle::all_edges_doubled);
    rec.poly("forest R g^" + std::to_string(q), fo.R.coefficient(q) * detail::g_power(q), t.R);
    rec.poly("forest G g^" + std::to_string(q), fo.G->coefficient(q) * detail::g_power(q), t.G);
  }
  auto hp = triangulation_hp(4);
  for (int n : {2, 4}) {
    std::vector<int> prof(static_cast<std::size_t>(n), 3);
    auto t = oracle::count_by_faces(prof, hp_decoration(false));
    rec.poly("hard particles R g^" + std::to_string(n), hp.R.coefficient(n) * detail::g_power(n), t.R);
    rec.poly("hard particles G g^" + std::to_string(n), hp.G->coefficient(n) * detail::g_power(n), t.G);
  }
  auto is = ising(2);
  for (int q : {1, 2}) {
    auto t = oracle::count_via_quadrangulations(q, ising_decoration(false), oracle::relaxed_bundles(2 * q + 1));
    rec.poly("ising R g^" + std::to_string(q), is.R.coefficient(q) * detail::g_power(q), t.R);
    rec.poly("ising G g^" + std::to_string(q), is.G->coefficient(q) * detail::g_power(q), t.G);
  }
  return rec.done();
}

inline CheckReport cancellation_suite(const CheckOptions& opt) {
  detail::Recorder rec("cancellation", opt.perturb);
  auto c = oracle::cancellation_check(opt.cancellation_edges, 1);
  rec.count("nonzero signed sums up to " + std::to_string(opt.cancellation_edges) + " edges" +
                (c.nonzero ? " (" + c.first_failure + ")" : ""),
            0, c.nonzero);
  auto inst = oracle::find_particle_instance(4, 12);
  rec.count("four-particle instance blockings", 12, inst ? inst->configurations : 0);
  if (inst) rec.count("four-particle instance signed sum", 0, long(oracle::signed_blocking_sum(inst->map, inst->origin, inst->charge, 1)));
  return rec.done();
}

inline CheckReport identities_suite(const CheckOptions& opt) {
  detail::Recorder rec("identities", opt.perturb);
  int N = opt.identity_order;
  rec.series("one-way R against forest R at g(1+y)^2", substitute_g_one_plus_y_squared(forest(N).R), quad_one_way(N).R);
  rec.series("even-valent form against the forest equation", spanning_sum_equation(N, false), even_valent(forest_vertex_weights(N), N));
  auto [lhs, rhs] = ising_alternative_form(ising(N).R);
  rec.series("ising R in both forms", lhs, rhs);
  return rec.done();
}

inline CheckReport duality_suite(const CheckOptions& opt) {
  detail::Recorder rec("duality", opt.perturb);
  ModelSpec s;
  s.white[3] = s.black[3] = AuxPoly::var("g");
  s.white[4] = s.black[4] = AuxPoly::var("g", 2);
  rec.flag("trivalent and tetravalent faces, order " + std::to_string(opt.identity_order),
           duality_check(generic_blocked(s, opt.identity_order), s));
  ModelSpec q;
  q.white[4] = q.black[4] = AuxPoly::var("g");
  rec.flag("tetravalent faces, order " + std::to_string(opt.identity_order), duality_check(generic_blocked(q, opt.identity_order), q));
  return rec.done();
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"roundtrip", "oracle-series", "cancellation", "identities", "duality"};
  return names;
}

inline CheckReport run_suite(const std::string& name, const CheckOptions& opt) {
  if (name == "roundtrip") return roundtrip_suite(opt);
  if (name == "oracle-series") return oracle_series_suite(opt);
  if (name == "cancellation") return cancellation_suite(opt);
  if (name == "identities") return identities_suite(opt);
  if (name == "duality") return duality_suite(opt);
  fail(ErrorCode::invalid_input, "unknown check suite '" + name + "'");
}

inline Json report_to_json(const CheckReport& r) {
  Json items = Json::array();
  for (const auto& i : r.items) {
    Json j{{"name", i.name}, {"expected", i.expected}, {"actual", i.actual}, {"match", i.match}};
    if (!i.counterexample.is_null()) j["counterexample"] = i.counterexample;
    items.push_back(std::move(j));
  }
  return Json{{"suite", r.suite}, {"passed", r.passed()}, {"items", std::move(items)}};
}

}  // namespace mobiles::checks
