// mobile_atlas: series solver, verification suites, singularity analysis, sampling and format
// conversion for blocked Eulerian maps and their mobiles.
//
// Exit codes: 0 success, 1 verification failure, 2 invalid input.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <iterator>
#include <sstream>
#include <thread>

#include "mobiles/mobiles.hpp"

using namespace mobiles;

namespace {

constexpr int exit_ok = 0, exit_failed = 1, exit_input = 2;

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::internal:
    case ErrorCode::tolerance_not_met:
    case ErrorCode::no_convergence:
    case ErrorCode::non_divisible:
    case ErrorCode::window_exceeded:
    case ErrorCode::not_contractive:
      return exit_failed;
    default:
      return exit_input;
  }
}

// ---------------------------------------------------------------------------------------------
// Output

struct Named {
  std::string name;
  GSeries series;
};

/// Content times common monomial times primitive part, e.g. 108*z1^2*(1+2*z1^2+z1^4).
std::string factored(const AuxPoly& p) {
  if (p.size() < 2) return p.to_string();
  Integer num = 0, den = 1;
  Monomial low;
  low.fill(255);
  for (const auto& [mono, c] : p.terms()) {
    num = gcd(num, numerator_of(c));
    den = lcm(den, denominator_of(c));
    for (std::size_t i = 0; i < mono.size(); ++i) low[i] = std::min(low[i], mono[i]);
  }
  Rational content(num, den);
  // sign of the term printed first: lowest total degree, then largest monomial
  const AuxPoly::Term* lead = &p.terms().front();
  for (const auto& t : p.terms()) {
    auto dt = total_degree(t.first), dl = total_degree(lead->first);
    if (dt < dl || (dt == dl && t.first > lead->first)) lead = &t;
  }
  if (lead->second < 0) content = -content;
  std::vector<AuxPoly::Term> prim;
  for (const auto& [mono, c] : p.terms()) {
    Monomial m = mono;
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::uint8_t(m[i] - low[i]);
    prim.push_back({m, c / content});
  }
  std::string out;
  if (content == 1 && std::all_of(low.begin(), low.end(), [](std::uint8_t e) { return e == 0; })) return p.to_string();
  if (content != 1) out = content == -1 ? "-" : to_string(content) + "*";
  std::string mono = monomial_to_string(low);
  if (!mono.empty()) out += mono + "*";
  return out + "(" + AuxPoly::from_terms(prim).to_string() + ")";
}

std::string variable_of(const GSeries& s) { return s.grading() == "faces" ? "g" : s.grading(); }

void print_series(const std::string& model, int order, const std::vector<Named>& table, const std::string& format) {
  if (format == "json") {
    Json series = Json::object();
    for (const auto& [name, s] : table) series[name] = series_to_json(s, variable_of(s));
    std::cout << Json{{"model", model}, {"order", order}, {"series", series}}.dump(2) << "\n";
  } else if (format == "csv") {
    std::cout << "series,variable,power,coefficient\n";
    for (const auto& [name, s] : table)
      for (int n = 0; n <= s.order(); ++n)
        if (!s[n].is_zero()) std::cout << name << "," << variable_of(s) << "," << n << ",\"" << s[n].to_string() << "\"\n";
  } else {
    std::cout << model << " to order " << order << "\n";
    for (const auto& [name, s] : table) {
      std::cout << name << ":\n";
      for (int n = 0; n <= s.order(); ++n) {
        if (s[n].is_zero()) continue;
        std::string power = s.grading() == "faces" ? "faces " + std::to_string(n) : variable_of(s) + "^" + std::to_string(n);
        std::cout << "  " << power << "  " << factored(s[n]) << "\n";
      }
    }
  }
}

std::string read_input(const std::string& path) {
  std::ostringstream buf;
  if (path.empty() || path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::invalid_input, "cannot open '" + path + "'");
    buf << in.rdbuf();
  }
  return buf.str();
}

unsigned thread_cap() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MOBILE_ATLAS_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end || v < 1) fail(ErrorCode::invalid_input, "MOBILE_ATLAS_THREADS must be a positive integer");
    n = unsigned(v);
  }
  return n;
}

// ---------------------------------------------------------------------------------------------
// solve

struct SolveArgs {
  std::string model;
  int order = 6;
  std::string y, z1, spec_path;
  int p = -1;
  bool rooted = false;
  std::string format = "pretty";
};

ModelSpec load_spec(const std::string& path) {
  if (path.empty()) fail(ErrorCode::invalid_input, "this model needs --spec FILE");
  return spec_from_json(parse_json(read_input(path)));
}

GSeries bind(GSeries s, const SolveArgs& a) {
  if (!a.y.empty()) s = s.substitute("y", parse_poly(a.y));
  if (!a.z1.empty()) s = s.substitute("z1", parse_poly(a.z1));
  return s;
}

void require_clean(const SolutionBundle& b) {
  if (!b.residual_failures.empty()) fail(ErrorCode::internal, "residual check failed: " + b.residual_failures.front());
  if (!b.window_ok) fail(ErrorCode::window_exceeded, "Laurent window too small for the requested order");
}

int run_solve(const SolveArgs& a) {
  if (a.order < 0) fail(ErrorCode::invalid_input, "order must be non-negative");
  if (a.p >= 0 && a.model != "generic") fail(ErrorCode::invalid_input, "--p applies to the generic model only");
  if (a.rooted && a.model != "hp-triangulation" && a.model != "ising")
    fail(ErrorCode::invalid_input, "--rooted applies to hp-triangulation and ising");
  int N = a.order;
  std::vector<Named> t;
  auto bundle_rows = [&](const SolutionBundle& b) {
    require_clean(b);
    t.push_back({"R", b.R});
    if (b.G) t.push_back({"G", *b.G});
  };
  if (a.model == "forest") {
    bundle_rows(forest(N));
  } else if (a.model == "quad-one-way") {
    bundle_rows(quad_one_way(N));
  } else if (a.model == "spanning-tree") {
    t.push_back({"F", spanning_tree_F(N)});
  } else if (a.model == "hp-triangulation") {
    auto b = triangulation_hp(N);
    bundle_rows(b);
    if (a.rooted) t.push_back({"G_rooted", hp_rooted(*b.G)});
  } else if (a.model == "ising") {
    auto b = ising(N);
    bundle_rows(b);
    t.push_back({"H", ising_rooted(*b.G)});
  } else if (a.model == "even-valent") {
    std::map<int, AuxPoly> v = forest_vertex_weights(N);
    if (!a.spec_path.empty()) {
      v.clear();
      for (const auto& [k, w] : load_spec(a.spec_path).white) {
        if (k % 2) fail(ErrorCode::invalid_input, "even-valent weights need even valences");
        v[k / 2] = w;
      }
    }
    t.push_back({"R", even_valent(v, N)});
  } else if (a.model == "max-blocked") {
    std::map<int, AuxPoly> w{{2, AuxPoly::var("a2")}, {3, AuxPoly::var("a3")}}, b{{2, AuxPoly::var("b2")}, {3, AuxPoly::var("b3")}};
    if (!a.spec_path.empty()) {
      ModelSpec s = load_spec(a.spec_path);
      w = s.white;
      b = s.black;
    }
    auto mb = max_blocked(w, b, N);
    require_clean(mb);
    t.push_back({"Z", *mb.Z});
  } else if (a.model == "generic") {
    ModelSpec s = load_spec(a.spec_path);
    if (a.p >= 0) {
      s.p = a.p;
      s.z.resize(std::size_t(std::min<int>(int(s.z.size()), a.p)));
      s.validate();
    }
    auto b = s.p > 0 ? hard_particles(s, N) : generic_blocked(s, N);
    require_clean(b);
    t.push_back({"R", b.R});
    if (b.G) t.push_back({"G", *b.G});
  } else {
    fail(ErrorCode::invalid_input, "unknown model '" + a.model + "'");
  }
  for (auto& row : t) row.series = bind(row.series, a);
  print_series(a.model, N, t, a.format);
  return exit_ok;
}

// ---------------------------------------------------------------------------------------------
// check

struct CheckArgs {
  std::vector<std::string> suites;
  checks::CheckOptions opt;
  std::string format = "pretty";
};

int run_check(const CheckArgs& a) {
  std::vector<std::string> names = a.suites.empty() ? checks::suite_names() : a.suites;
  for (const auto& n : names)
    if (std::find(checks::suite_names().begin(), checks::suite_names().end(), n) == checks::suite_names().end())
      fail(ErrorCode::invalid_input, "unknown check suite '" + n + "'");
  if (a.opt.max_edges < 1 || a.opt.max_edges > oracle::max_oracle_edges)
    fail(ErrorCode::invalid_input, "--max-edges must lie in 1.." + std::to_string(oracle::max_oracle_edges));
  if (a.opt.identity_order < 0) fail(ErrorCode::invalid_input, "order must be non-negative");
  // suites are independent; run up to the thread cap at once, report in request order
  std::vector<checks::CheckReport> reports(names.size());
  unsigned cap = thread_cap();
  for (std::size_t start = 0; start < names.size(); start += cap) {
    std::vector<std::future<checks::CheckReport>> running;
    for (std::size_t i = start; i < std::min(names.size(), start + cap); ++i)
      running.push_back(std::async(cap > 1 ? std::launch::async : std::launch::deferred, checks::run_suite, names[i], a.opt));
    for (std::size_t i = 0; i < running.size(); ++i) reports[start + i] = running[i].get();
  }
  bool all = std::all_of(reports.begin(), reports.end(), [](const checks::CheckReport& r) { return r.passed(); });
  if (a.format == "json") {
    Json out = Json::array();
    for (const auto& r : reports) out.push_back(checks::report_to_json(r));
    std::cout << Json{{"passed", all}, {"suites", out}}.dump(2) << "\n";
  } else if (a.format == "csv") {
    std::cout << "suite,item,expected,actual,match\n";
    for (const auto& r : reports)
      for (const auto& i : r.items)
        std::cout << r.suite << ",\"" << i.name << "\",\"" << i.expected << "\",\"" << i.actual << "\"," << (i.match ? "true" : "false") << "\n";
  } else {
    for (const auto& r : reports) {
      std::cout << (r.passed() ? "PASS " : "FAIL ") << r.suite << "\n";
      for (const auto& i : r.items) std::cout << "  " << (i.match ? "ok   " : "FAIL ") << i.name << "\n";
      if (const auto* f = r.first_failure()) {
        std::cout << "  counterexample: " << f->name << "\n    expected " << f->expected << "\n    actual   " << f->actual << "\n";
        if (!f->counterexample.is_null()) std::cout << "    " << f->counterexample.dump() << "\n";
      }
    }
  }
  return all ? exit_ok : exit_failed;
}

// ---------------------------------------------------------------------------------------------
// singularity

int run_singularity(const std::string& family, const std::string& y, double tol, const std::string& format) {
  if (!(tol > 0)) fail(ErrorCode::invalid_input, "--tol must be positive");
  auto str = [](const Real& r) { return r.str(30, std::ios_base::scientific); };
  Json out;
  bool ok = true;
  if (family == "spanning-tree") {
    auto s = spanning_tree_singularity();
    out = Json{{"family", family}, {"alpha_star", to_string(s.alpha_star)}, {"classification", to_string(s.classification)},
               {"amplitude", str(s.amplitude)}, {"limit_amplitude", str(s.limit_amplitude)}};
  } else if (family == "forest") {
    Real yv;
    try {
      yv = Real(y);
    } catch (const std::exception&) {
      fail(ErrorCode::invalid_input, "--y must be a number");
    }
    auto s = forest_singularity(yv, tol);
    Real residual = abs(s.dg_du), scale = abs(s.u_star * s.d2g_du2);
    ok = residual <= Real(tol) * scale && s.d2g_du2 < 0 && s.u_star > 0 && s.u_star * 27 < 1;
    out = Json{{"family", family},          {"y", y},
               {"u_star", str(s.u_star)},   {"g_star", str(s.g_star)},
               {"dg_du", str(s.dg_du)},     {"d2g_du2", str(s.d2g_du2)},
               {"F_star", str(s.F_star)},   {"classification", to_string(s.classification)},
               {"tolerance", tol},          {"residual_ok", ok}};
  } else {
    fail(ErrorCode::invalid_input, "unknown family '" + family + "'");
  }
  if (format == "json") {
    std::cout << out.dump(2) << "\n";
  } else if (format == "csv") {
    std::cout << "key,value\n";
    for (const auto& [k, v] : out.items()) std::cout << k << "," << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  } else {
    for (const auto& [k, v] : out.items()) std::cout << k << " = " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  }
  return ok ? exit_ok : exit_failed;
}

// ---------------------------------------------------------------------------------------------
// sample

int run_sample(const std::string& model, int size, std::uint64_t seed, const std::string& y, const std::string& z1,
               const std::string& spec_path, const std::string& emit) {
  ModelSpec spec;
  std::map<std::string, Rational> values;
  if (model == "forest") {
    spec = quadrangulation_spec(BlockMode::pairs);
    values["y"] = 1;
  } else if (model == "quad-one-way") {
    spec = quadrangulation_spec(BlockMode::directed);
    values["y"] = 1;
  } else if (model == "hp-triangulation") {
    spec = hp_triangulation_spec();
    spec.y = AuxPoly(-1);
  } else if (model == "ising") {
    spec = ising_spec();
  } else if (model == "generic") {
    spec = load_spec(spec_path);
  } else {
    fail(ErrorCode::invalid_input, "sampling is not available for model '" + model + "'");
  }
  if (!y.empty()) values["y"] = parse_rational(y);
  if (!z1.empty()) values["z1"] = parse_rational(z1);
  if (spec.p > 0 && !values.count("z1")) values["z1"] = 1;
  // every weight variable other than the grading one needs a value
  std::string grading = default_grading(spec).var();
  std::vector<AuxPoly> weights{spec.y};
  for (const auto* side : {&spec.white, &spec.black})
    for (const auto& [k, w] : *side) weights.push_back(w);
  for (int i = 1; i <= spec.p; ++i) weights.push_back(spec.occupancy(i));
  for (const auto& w : weights)
    for (const auto& [mono, c] : w.terms())
      for (std::size_t i = 0; i < mono.size(); ++i) {
        std::string name = VariableRegistry::instance().name(i);
        if (mono[i] && name != grading && !values.count(name)) fail(ErrorCode::invalid_input, "no value given for '" + name + "'");
      }
  Mobile mob = well_labeled(sample_mobile(spec, size, seed, values));
  if (emit == "mobile") {
    std::cout << mobile_to_json(mob, spec.mode).dump() << "\n";
    return exit_ok;
  }
  if (mob.labeled_count() == 0) fail(ErrorCode::degenerate_map, "the sampled mobile is the single-vertex map");
  BlockedConfig c = from_mobile(mob, spec.mode);
  if (!validate_blocking(c).valid) fail(ErrorCode::internal, "sampled configuration is not valid");
  std::cout << map_to_json(c).dump() << "\n";
  return exit_ok;
}

// ---------------------------------------------------------------------------------------------
// convert

int run_convert(const std::string& to, const std::string& input, const std::string& mode_flag) {
  Json in = parse_json(read_input(input));
  bool is_map = in.is_object() && in.contains("sigma");
  if (to == "mobile") {
    if (!is_map) fail(ErrorCode::invalid_input, "expected a map");
    BlockedConfig c = map_from_json(in);
    auto check = validate_blocking(c);
    if (!check.valid) fail(ErrorCode::connectivity_violated, check.witness);
    Mobile mob = to_mobile(c);
    auto diag = check_well_labeled(mob);
    if (!diag.ok()) fail(ErrorCode::internal, "encoded mobile is not well labeled: " + diag.problems.front());
    std::cout << mobile_to_json(mob, c.mode).dump() << "\n";
  } else if (to == "map") {
    BlockedConfig c;
    if (is_map) {
      c = map_from_json(in);
    } else {
      Mobile mob = mobile_from_json(in);
      BlockMode mode = !mode_flag.empty()    ? parse_block_mode(mode_flag)
                       : in.contains("mode") ? parse_block_mode(in.at("mode").get<std::string>())
                                             : BlockMode::directed;
      c = from_mobile(mob, mode);
    }
    auto check = validate_blocking(c);
    if (!check.valid) fail(is_map ? ErrorCode::connectivity_violated : ErrorCode::internal, check.witness);
    std::cout << map_to_json(canonical_config(c)).dump() << "\n";
  } else {
    fail(ErrorCode::invalid_input, "--to must be 'mobile' or 'map'");
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact enumeration of Eulerian maps with blocked edges through well-labeled mobiles"};
  app.require_subcommand(1);
  std::string format = "pretty";
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "pretty"}));
  };
  const std::vector<std::string> models{"generic", "quad-one-way", "forest", "spanning-tree", "hp-triangulation", "ising", "even-valent", "max-blocked"};

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Solve a model's equations to a given order");
  solve->add_option("model", sa.model, "Model name")->required()->check(CLI::IsMember(models));
  solve->add_option("--order", sa.order, "Highest power kept");
  solve->add_option("--y", sa.y, "Value substituted for y");
  solve->add_option("--z1", sa.z1, "Value substituted for z1");
  solve->add_option("--p", sa.p, "Exclusion parameter (generic model)");
  solve->add_flag("--rooted", sa.rooted, "Also print the rooted series");
  solve->add_option("--spec", sa.spec_path, "Model specification JSON");
  add_format(solve);

  CheckArgs ca;
  auto* check = app.add_subcommand("check", "Run verification suites");
  check->add_option("suites", ca.suites, "Suites to run (default: all)");
  check->add_option("--max-edges", ca.opt.max_edges, "Largest map in the round trip suite");
  check->add_option("--order", ca.opt.identity_order, "Order of the series identities");
  check->add_flag("--inject-perturbation", ca.opt.perturb, "Shift one expected value (negative control)")->group("");
  add_format(check);

  std::string sy = "1", family = "forest";
  double tol = 1e-12;
  auto* sing = app.add_subcommand("singularity", "Locate the dominant singularity of the forest series");
  sing->add_option("--y", sy, "Value of y (forest family)");
  sing->add_option("--tol", tol, "Relative tolerance on dg/du");
  sing->add_option("--family", family, "forest or spanning-tree")->check(CLI::IsMember({"forest", "spanning-tree"}));
  add_format(sing);

  std::string sm_model, sm_y, sm_z1, sm_spec, emit = "map";
  int size = 10;
  std::uint64_t seed = 1;
  auto* sample = app.add_subcommand("sample", "Draw a random pointed map through its mobile");
  sample->add_option("model", sm_model, "Model name")->required()->check(CLI::IsMember(models));
  sample->add_option("--size", size, "Power of g");
  sample->add_option("--seed", seed, "Random seed");
  sample->add_option("--y", sm_y, "Value of y");
  sample->add_option("--z1", sm_z1, "Value of z1");
  sample->add_option("--spec", sm_spec, "Model specification JSON");
  sample->add_option("--emit", emit, "map or mobile")->check(CLI::IsMember({"map", "mobile"}));

  std::string to, input, mode;
  auto* convert = app.add_subcommand("convert", "Translate between map and mobile JSON");
  convert->add_option("--to", to, "mobile or map")->required()->check(CLI::IsMember({"mobile", "map"}));
  convert->add_option("--input", input, "Input file (default: standard input)");
  convert->add_option("--mode", mode, "Blocking mode when decoding a mobile")->check(CLI::IsMember({"directed", "pairs", "none"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? exit_ok : exit_input;
  }

  try {
    if (*solve) {
      sa.format = format;
      return run_solve(sa);
    }
    if (*check) {
      ca.format = format;
      return run_check(ca);
    }
    if (*sing) return run_singularity(family, sy, tol, format);
    if (*sample) return run_sample(sm_model, size, seed, sm_y, sm_z1, sm_spec, emit);
    if (*convert) return run_convert(to, input, mode);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_failed;
  }
  return exit_input;
}
