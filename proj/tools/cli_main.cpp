// coarsedim command line tool: space/groupoid generation, budgeted dimension
// solvers, dynamic dimension cross-checks, growth comparison, partitions of
// unity and amenability witnesses, over stable JSON/CSV formats.
//
// Exit codes: 0 success, 2 usage, 3 resource cap, 4 solver cap,
// 5 verification failure.

#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "coarsedim/amenability.hpp"
#include "coarsedim/json_io.hpp"
#include "json.hpp"

using namespace coarsedim;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitResourceCap = 3;
constexpr int kExitSolverCap = 4;
constexpr int kExitVerification = 5;

Group parse_group_spec(const std::string& spec) {
  auto fail = [&]() -> Group {
    throw CLI::ValidationError("group", "unknown group spec '" + spec + "'");
  };
  if (spec == "trivial") return Group::trivial();
  if (spec == "klein") return Group::abelian({2, 2});
  auto colon = spec.find(':');
  if (colon == std::string::npos) return fail();
  std::string kind = spec.substr(0, colon);
  std::string rest = spec.substr(colon + 1);
  if (kind == "cyclic") return Group::cyclic(std::stoi(rest));
  if (kind == "z") return Group::zball(std::stoll(rest));
  if (kind == "z2") return Group::z2ball(std::stoll(rest));
  if (kind == "abelian") {
    std::vector<int> orders;
    std::stringstream ss(rest);
    std::string tok;
    while (std::getline(ss, tok, ',')) orders.push_back(std::stoi(tok));
    return Group::abelian(orders);
  }
  return fail();
}

GroupAction parse_action_spec(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw CLI::ValidationError("action", "unknown action spec '" + spec + "'");
  std::string kind = spec.substr(0, colon);
  std::string rest = spec.substr(colon + 1);
  if (kind == "rotation") return GroupAction::rotation(std::stoi(rest));
  if (kind == "trivial") return GroupAction::trivial_on(std::stoi(rest));
  if (kind == "regular") return GroupAction::regular(parse_group_spec(rest));
  throw CLI::ValidationError("action", "unknown action spec '" + spec + "'");
}

struct RRange {
  Rat lo{0}, hi{0};
  bool range = false;
};

RRange parse_r_arg(const std::string& s) {
  RRange r;
  auto dots = s.find("..");
  if (dots == std::string::npos) {
    r.lo = r.hi = parse_rat(s);
    return r;
  }
  r.lo = parse_rat(s.substr(0, dots));
  r.hi = parse_rat(s.substr(dots + 2));
  r.range = true;
  return r;
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-")
    std::cout << content;
  else
    write_file(path, content);
}

FiniteMetricSpace random_graph_space(int n, unsigned seed, int extra_edges) {
  std::mt19937 rng(seed);
  std::vector<std::vector<long long>> adj(n, std::vector<long long>(n, 1 << 20));
  auto edge = [&](int a, int b) {
    if (a != b) adj[a][b] = adj[b][a] = 1;
  };
  for (int i = 1; i < n; ++i) edge(static_cast<int>(rng() % i), i);
  for (int e = 0; e < extra_edges; ++e)
    edge(static_cast<int>(rng() % n), static_cast<int>(rng() % n));
  for (int i = 0; i < n; ++i) adj[i][i] = 0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        adj[i][j] = std::min(adj[i][j], adj[i][k] + adj[k][j]);
  std::vector<std::vector<Rat>> d(n, std::vector<Rat>(n));
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) {
    names.push_back(std::to_string(i));
    for (int j = 0; j < n; ++j) d[i][j] = Rat(adj[i][j]);
  }
  return FiniteMetricSpace(names, d);
}

int run(int argc, char** argv) {
  CLI::App app{"budgeted coarse-dimension toolkit"};
  app.require_subcommand(1);
  int jobs = 1;
  app.add_option("--jobs", jobs, "internal solver parallelism (reserved)");

  // ---- space ----------------------------------------------------------
  auto* space = app.add_subcommand("space", "metric space generation");
  auto* sgen = space->add_subcommand("gen", "generate a space file");
  std::string kind, out_path, group_spec = "cyclic:6", weights_arg = "1";
  int n_arg = 1, point_cap = 4096, extra_edges = 0;
  unsigned seed = 1;
  std::string dims_arg = "2x2", radius_arg = "1";
  sgen->add_option("kind", kind, "path|cycle|grid|dirsum|cayley|random")
      ->required();
  sgen->add_option("--n", n_arg, "points (path/cycle/random)");
  sgen->add_option("--dims", dims_arg, "grid dimensions, e.g. 3x4");
  sgen->add_option("--weights", weights_arg, "dirsum weights, e.g. 1,2,3");
  sgen->add_option("--radius", radius_arg, "ball radius (dirsum/cayley)");
  sgen->add_option("--group", group_spec,
                   "group spec: trivial|klein|cyclic:n|abelian:a,b|z:r|z2:r");
  sgen->add_option("--point-cap", point_cap, "generator point cap");
  sgen->add_option("--seed", seed, "seed for random graphs");
  sgen->add_option("--extra-edges", extra_edges, "extra random edges");
  sgen->add_option("-o,--out", out_path, "output file (default stdout)");

  // ---- groupoid -------------------------------------------------------
  auto* gpd = app.add_subcommand("groupoid", "groupoid generation");
  auto* ggen = gpd->add_subcommand("gen", "generate a groupoid file");
  std::string gkind, gspace_path, gaction_spec = "rotation:12";
  ggen->add_option("kind", gkind, "pair|action")->required();
  ggen->add_option("--space", gspace_path, "space file for the pair groupoid");
  ggen->add_option("--action", gaction_spec,
                   "action spec: rotation:n|trivial:n|regular:<group>");
  ggen->add_option("-o,--out", out_path, "output file (default stdout)");

  // ---- ad -------------------------------------------------------------
  auto* ad = app.add_subcommand("ad", "budgeted asymptotic dimension solvers");
  std::string def = "families", r_arg = "1", d_arg = "1", witness_path,
              space_path;
  int m_max = 8;
  ad->add_option("--def", def, "ad|rmult|families|coarse|greedy");
  ad->add_option("--R", r_arg, "scale, a single value or a range a..b")
      ->required();
  ad->add_option("--D", d_arg, "diameter budget")->required();
  ad->add_option("--m-max", m_max, "search ceiling");
  ad->add_option("--witness", witness_path, "write the witness cover (json)");
  ad->add_option("-o,--out", out_path, "output csv for range runs");
  ad->add_option("space", space_path, "space json file")->required();

  // ---- dad ------------------------------------------------------------
  auto* dad = app.add_subcommand("dad", "dynamic dimension solvers and cross-checks");
  auto* dsolve = dad->add_subcommand("solve", "dad of a groupoid file");
  std::string dad_r = "2", dad_b, dad_gpath;
  bool orbit = false;
  dsolve->add_option("--R", dad_r, "generator length threshold (strict)")
      ->required();
  dsolve->add_option("--B", dad_b, "length budget (omit for unbounded)");
  dsolve->add_option("--m-max", m_max, "search ceiling");
  dsolve->add_flag("--orbit", orbit, "require whole partial orbits per set");
  dsolve->add_option("--witness", witness_path, "write the witness cover");
  dsolve->add_option("groupoid", dad_gpath, "groupoid json file")->required();

  auto* d412 = dad->add_subcommand("crosscheck412",
                                   "action vs transformation groupoid");
  std::string cc_action = "rotation:12";
  d412->add_option("--action", cc_action, "action spec")->required();
  d412->add_option("--R", dad_r, "length threshold")->required();
  d412->add_option("--B", dad_b, "length budget");
  d412->add_option("--m-max", m_max, "search ceiling");

  auto* d416 = dad->add_subcommand("crosscheck416",
                                   "pair groupoid vs coarse vs families");
  d416->add_option("--R", r_arg, "separation scale")->required();
  d416->add_option("--D", d_arg, "diameter budget")->required();
  d416->add_option("--m-max", m_max, "search ceiling");
  d416->add_option("space", space_path, "space json file")->required();

  // ---- growth ---------------------------------------------------------
  auto* growth = app.add_subcommand("growth", "growth preorder and classification");
  auto* gcmp = growth->add_subcommand("compare", "two-sided domination check");
  std::string f_path, g_path;
  int k_max = 5;
  gcmp->add_option("--kmax", k_max, "largest witness constant tried");
  gcmp->add_option("f", f_path, "first curve csv")->required();
  gcmp->add_option("g", g_path, "second curve csv")->required();
  auto* gcls = growth->add_subcommand("classify", "heuristic growth type");
  gcls->add_option("f", f_path, "curve csv")->required();

  // ---- pou ------------------------------------------------------------
  auto* pou = app.add_subcommand("pou", "partitions of unity");
  auto* prun = pou->add_subcommand("run", "base cover, chains, pou, verification");
  std::string eps_arg = "0.5";
  double alpha = 0.0;
  bool finite_dad = false;
  prun->add_option("--R", dad_r, "generator length threshold")->required();
  prun->add_option("--eps", eps_arg, "target variation bound")->required();
  prun->add_option("--alpha", alpha, "growth exponent in (0,1)");
  prun->add_flag("--finite-dad", finite_dad, "flat mode with measured dimension");
  prun->add_option("--B", dad_b, "length budget");
  prun->add_option("--m-max", m_max, "search ceiling");
  prun->add_option("groupoid", dad_gpath, "groupoid json file")->required();
  prun->add_option("-o,--out", out_path, "output pou json");

  // ---- amen -----------------------------------------------------------
  auto* amen = app.add_subcommand("amen", "amenability witnesses");
  auto* apipe = amen->add_subcommand("pipeline", "end-to-end witness assembly");
  apipe->add_option("--R", dad_r, "generator length threshold")->required();
  apipe->add_option("--eps", eps_arg, "target tolerance")->required();
  apipe->add_option("--alpha", alpha, "growth exponent (p-power mode)");
  apipe->add_flag("--finite-dad", finite_dad, "flat mode");
  apipe->add_option("--B", dad_b, "length budget");
  apipe->add_option("--m-max", m_max, "search ceiling");
  apipe->add_option("groupoid", dad_gpath, "groupoid json file")->required();
  apipe->add_option("-o,--out", out_path, "output witness json");

  auto* acheck = amen->add_subcommand("check", "check a witness file");
  std::string witness_in;
  acheck->add_option("--R", dad_r, "generator length threshold")->required();
  acheck->add_option("--eps", eps_arg, "tolerance")->required();
  acheck->add_option("groupoid", dad_gpath, "groupoid json file")->required();
  acheck->add_option("witness", witness_in, "witness json file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  // ---- dispatch -------------------------------------------------------
  if (sgen->parsed()) {
    GenOptions opts;
    opts.point_cap = point_cap;
    FiniteMetricSpace X = [&]() {
      if (kind == "path") return gen_path(n_arg);
      if (kind == "cycle") return gen_cycle(n_arg);
      if (kind == "grid") {
        std::vector<int> dims;
        std::stringstream ss(dims_arg);
        std::string tok;
        while (std::getline(ss, tok, 'x')) dims.push_back(std::stoi(tok));
        return gen_grid(dims, opts);
      }
      if (kind == "dirsum") {
        std::vector<long long> ws;
        std::stringstream ss(weights_arg);
        std::string tok;
        while (std::getline(ss, tok, ',')) ws.push_back(std::stoll(tok));
        return gen_dirsum(ws, std::stoll(radius_arg), opts);
      }
      if (kind == "cayley")
        return gen_cayley_ball(parse_group_spec(group_spec),
                               parse_rat(radius_arg), opts);
      if (kind == "random") return random_graph_space(n_arg, seed, extra_edges);
      throw CLI::ValidationError("kind", "unknown space kind '" + kind + "'");
    }();
    std::string text = space_to_json(X);
    if (kind == "random") {
      auto j = nlohmann::json::parse(text);
      j["meta"] = {{"seed", seed}, {"extra_edges", extra_edges}};
      text = j.dump(2);
    }
    emit(out_path, text);
    return 0;
  }

  if (ggen->parsed()) {
    if (gkind == "pair") {
      if (gspace_path.empty())
        throw CLI::ValidationError("--space", "pair groupoid needs a space file");
      auto X = space_from_json(read_file(gspace_path));
      auto [G, len] = build_pair_groupoid(X);
      emit(out_path, groupoid_to_json(G, len));
      return 0;
    }
    if (gkind == "action") {
      auto [G, len] =
          build_transformation_groupoid(parse_action_spec(gaction_spec));
      emit(out_path, groupoid_to_json(G, len));
      return 0;
    }
    throw CLI::ValidationError("kind", "unknown groupoid kind '" + gkind + "'");
  }

  if (ad->parsed()) {
    auto X = space_from_json(read_file(space_path));
    RRange rr = parse_r_arg(r_arg);
    Rat D = parse_rat(d_arg);
    auto solve_one = [&](const Rat& R) -> SolveResult {
      BudgetedDimensionQuery q{R, D, m_max};
      if (def == "ad") return solve_ad(X, q);
      if (def == "rmult") return solve_rmult(X, q);
      if (def == "families") return solve_families(X, q);
      if (def == "coarse")
        return solve_coarse(X, Entourage::tube(X, R), Entourage::tube(X, D),
                            m_max);
      if (def == "greedy") {
        auto [ub, cover] = greedy_families(X, R, D);
        SolveResult r;
        r.value = ub;
        r.tagged = cover;
        return r;
      }
      throw CLI::ValidationError("--def", "unknown definition '" + def + "'");
    };
    if (!rr.range) {
      auto r = solve_one(rr.lo);
      if (r.value)
        std::cout << *r.value << "\n";
      else
        std::cout << "inf\n";
      if (!witness_path.empty() && r.value) {
        TaggedCover tc = r.tagged;
        if (tc.families.empty() && !r.cover.empty()) tc.families = {r.cover};
        write_file(witness_path, cover_to_json(tc));
      }
      return 0;
    }
    DimensionCurve curve;
    for (Rat R = rr.lo; R <= rr.hi; R += Rat(1)) {
      if (R.denominator() != 1)
        throw CLI::ValidationError("--R", "range runs need integer scales");
      auto r = solve_one(R);
      curve.samples[R.numerator()] =
          r.value ? std::optional<int>(*r.value) : std::nullopt;
    }
    emit(out_path, curve_to_csv(curve));
    return 0;
  }

  if (dsolve->parsed()) {
    auto [G, len] = groupoid_from_json(read_file(dad_gpath));
    DadQuery q;
    q.generators = arrows_below_length(G, len, parse_rat(dad_r));
    if (!dad_b.empty()) q.budget = parse_rat(dad_b);
    q.m_max = m_max;
    q.orbit_condition = orbit;
    auto r = dad_groupoid(G, len, q);
    if (r.value)
      std::cout << *r.value << "\n";
    else
      std::cout << "inf\n";
    if (!witness_path.empty() && r.value) {
      TaggedCover tc;
      tc.families = {r.cover};
      write_file(witness_path, cover_to_json(tc));
    }
    return 0;
  }

  if (d412->parsed()) {
    auto rep = crosscheck_lemma412(
        parse_action_spec(cc_action), parse_rat(dad_r),
        dad_b.empty() ? std::nullopt : std::optional<Rat>(parse_rat(dad_b)),
        m_max);
    auto show = [](const std::optional<int>& v) {
      return v ? std::to_string(*v) : std::string("inf");
    };
    std::cout << show(rep.values[0]) << " = " << show(rep.values[1]) << " ("
              << rep.detail << ")\n";
    return rep.ok ? 0 : kExitVerification;
  }

  if (d416->parsed()) {
    auto X = space_from_json(read_file(space_path));
    auto rep = crosscheck_thm416(X, parse_rat(r_arg), parse_rat(d_arg), m_max);
    auto show = [](const std::optional<int>& v) {
      return v ? std::to_string(*v) : std::string("inf");
    };
    std::cout << show(rep.values[0]) << " = " << show(rep.values[1]) << " = "
              << show(rep.values[2]) << " (" << rep.detail << ")\n";
    return rep.ok ? 0 : kExitVerification;
  }

  if (gcmp->parsed()) {
    auto f = curve_from_csv(read_file(f_path));
    auto g = curve_from_csv(read_file(g_path));
    auto r = equiv(f, g, k_max);
    auto show = [](const std::optional<PreceqWitness>& w) {
      if (!w) return std::string("none");
      return "k=" + std::to_string(w->k) + " window=[" +
             std::to_string(w->window_lo) + "," + std::to_string(w->window_hi) +
             "]";
    };
    std::cout << "f<=g: " << show(r.fg) << "\n";
    std::cout << "g<=f: " << show(r.gf) << "\n";
    switch (r.kind) {
      case EquivKind::equivalent: std::cout << "equivalent\n"; break;
      case EquivKind::only_fg: std::cout << "only f dominated\n"; break;
      case EquivKind::only_gf: std::cout << "only g dominated\n"; break;
      case EquivKind::incomparable: std::cout << "incomparable on window\n"; break;
    }
    return 0;
  }

  if (gcls->parsed()) {
    auto r = classify(curve_from_csv(read_file(f_path)));
    switch (r.kind) {
      case GrowthClass::constant:
        std::cout << "constant " << r.estimate << "\n";
        break;
      case GrowthClass::polynomial:
        std::cout << "polynomial degree~" << r.estimate << "\n";
        break;
      case GrowthClass::exponential:
        std::cout << "exponential rate~" << r.estimate << "\n";
        break;
      case GrowthClass::inconclusive:
        std::cout << "inconclusive\n";
        break;
    }
    std::cout << "(heuristic; residuals const=" << r.residual_constant
              << " poly=" << r.residual_polynomial
              << " exp=" << r.residual_exponential << ")\n";
    return 0;
  }

  if (prun->parsed() || apipe->parsed()) {
    auto [G, len] = groupoid_from_json(read_file(dad_gpath));
    PipelineOptions opts;
    opts.R = parse_rat(dad_r);
    opts.eps = std::stod(eps_arg);
    if (alpha > 0.0) opts.alpha = alpha;
    if (!dad_b.empty()) opts.budget = parse_rat(dad_b);
    opts.m_max = m_max;
    auto res = amenability_pipeline(G, len, opts);
    if (!res.failed_stage.empty()) {
      std::cerr << "failed stage: " << res.failed_stage << "\n";
      return kExitVerification;
    }
    if (prun->parsed()) {
      emit(out_path, pou_to_json(res.pou));
      std::cerr << "pou " << (res.pou_report.pass ? "pass" : "FAIL")
                << "; worst p*sum step " << res.pou_report.max_p_sum_step
                << "\n";
      return res.pou_report.pass ? 0 : kExitVerification;
    }
    emit(out_path, witness_to_json(res.witness, &res.final_report));
    std::cerr << (res.pass ? "pass" : "FAIL") << "; unit defect "
              << res.final_report.max_unit_defect << ", invariance defect "
              << res.final_report.max_invariance_defect << "\n";
    return res.pass ? 0 : kExitVerification;
  }

  if (acheck->parsed()) {
    auto [G, len] = groupoid_from_json(read_file(dad_gpath));
    auto w = witness_from_json(read_file(witness_in), G.size());
    auto rep = check_amenability(
        G, w, arrows_below_length(G, len, parse_rat(dad_r)), std::stod(eps_arg));
    std::cout << (rep.pass ? "pass" : "FAIL") << "\n";
    return rep.pass ? 0 : kExitVerification;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::length_error& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    std::string what = e.what();
    return what.find("solver") != std::string::npos ? kExitSolverCap
                                                    : kExitResourceCap;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
