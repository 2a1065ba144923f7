#include <random>
#include "coarsedim/json_io.hpp"

#include "coarsedim/cover.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace coarsedim;

namespace {

std::vector<PointSet> two_blocks() { return {{0, 1}, {2, 3}}; }

}  // namespace

TEST_CASE("cover stats on the split cover of path(4)") {
  auto p4 = gen_path(4);
  auto st = cover_stats(p4, two_blocks(), Rat(1));
  CHECK(st.multiplicity == 1);
  REQUIRE(st.r_multiplicity.has_value());
  // enumeration oracle: B(1,1) = {0,1,2} meets both blocks
  int worst = 0;
  for (int x = 0; x < 4; ++x) {
    int c = 0;
    for (const auto& s : two_blocks())
      if (p4.point_set_distance(x, s) <= Rat(1)) ++c;
    worst = std::max(worst, c);
  }
  CHECK(worst == 2);
  CHECK(*st.r_multiplicity == worst);
  // {1,2} has diameter 1 and fits in no block
  REQUIRE(st.lebesgue.has_value());
  CHECK(*st.lebesgue == Rat(0));
  CHECK(st.max_diameter == Rat(1));
}

TEST_CASE("cover stats corner cases") {
  auto p4 = gen_path(4);
  // whole space in one set: every subset fits
  auto st = cover_stats(p4, {{0, 1, 2, 3}});
  CHECK(!st.lebesgue.has_value());
  CHECK(st.multiplicity == 1);

  CHECK_THROWS_AS(cover_stats(p4, {}), std::invalid_argument);
  CHECK_THROWS_AS(cover_stats(p4, {{0, 1}}), std::invalid_argument);  // not a cover
  CHECK_THROWS_AS(cover_stats(p4, {{0, 1, 2, 9}}), std::invalid_argument);
}

TEST_CASE("one-point space solves to zero for every solver") {
  auto pt = gen_path(1);
  BudgetedDimensionQuery q{Rat(5), Rat(0), 3};
  CHECK(solve_ad(pt, q).value == 0);
  CHECK(solve_rmult(pt, q).value == 0);
  auto fam = solve_families(pt, q);
  CHECK(fam.value == 0);
  CHECK(fam.tagged.families.size() == 1);
  CHECK(solve_coarse(pt, Entourage::diagonal(pt), Entourage::diagonal(pt), 3).value == 0);
}

TEST_CASE("solve_families frozen examples") {
  auto p6 = gen_path(6);
  auto r = solve_families(p6, {Rat(1), Rat(2), 8});
  CHECK(r.value == 1);
  CHECK(check_tagged_cover(p6, r.tagged, Rat(1), Rat(2)).ok);

  auto c4 = gen_cycle(4);
  auto r2 = solve_families(c4, {Rat(1), Rat(1), 8});
  CHECK(r2.value == 1);
  CHECK(check_tagged_cover(c4, r2.tagged, Rat(1), Rat(1)).ok);
}

TEST_CASE("solve_families against the partition oracle") {
  std::vector<FiniteMetricSpace> spaces;
  spaces.push_back(gen_path(5));
  spaces.push_back(gen_path(7));
  spaces.push_back(gen_cycle(5));
  spaces.push_back(gen_cycle(6));
  spaces.push_back(gen_grid({2, 3}));
  for (const auto& X : spaces)
    for (long long R = 1; R <= 2; ++R)
      for (long long D = 1; D <= 3; ++D) {
        auto got = solve_families(X, {Rat(R), Rat(D), 4});
        auto want = oracle::min_families(X, Rat(R), Rat(D), 4);
        CHECK(got.value == want);
        if (got.value)
          CHECK(check_tagged_cover(X, got.tagged, Rat(R), Rat(D)).ok);
      }
}

TEST_CASE("solve_coarse equals solve_families on metric tubes") {
  auto p6 = gen_path(6);
  auto e1 = Entourage::tube(p6, Rat(1));
  auto e2 = Entourage::tube(p6, Rat(2));
  CHECK(solve_coarse(p6, e1, e2, 8).value == 1);

  auto c4 = gen_cycle(4);
  CHECK(solve_coarse(c4, Entourage::tube(c4, Rat(1)), Entourage::tube(c4, Rat(1)), 8).value == 1);

  // degenerate budgets: diagonal separation, full square bound
  std::vector<std::pair<int, int>> full;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) full.emplace_back(i, j);
  CHECK(solve_coarse(c4, Entourage::diagonal(c4), Entourage(c4, full), 8).value == 0);
}

TEST_CASE("solve_ad basics and infeasibility") {
  auto p6 = gen_path(6);
  // D = 5 admits the whole space as one set, so any R is fine
  auto a = solve_ad(p6, {Rat(1), Rat(5), 3});
  auto f = solve_families(p6, {Rat(1), Rat(5), 3});
  CHECK(a.value == 0);
  CHECK(a.value == f.value);

  // no diameter-2 cover has Lebesgue number above 10
  CHECK(!solve_ad(p6, {Rat(10), Rat(2), 3}).value.has_value());
  // with one family, R = 10 forbids a second set and one set cannot cover
  CHECK(!solve_families(p6, {Rat(10), Rat(2), 0}).value.has_value());
  CHECK(solve_families(p6, {Rat(10), Rat(2), 1}).value == 1);
}

TEST_CASE("solve_rmult examples and the two-sided chain") {
  auto c4 = gen_cycle(4);
  CHECK(solve_rmult(c4, {Rat(1), Rat(1), 8}).value == 1);

  std::vector<FiniteMetricSpace> spaces;
  spaces.push_back(gen_path(6));
  spaces.push_back(gen_cycle(6));
  spaces.push_back(gen_grid({2, 3}));
  for (const auto& X : spaces)
    for (long long R = 1; R <= 2; ++R)
      for (long long D = 1; D <= 3; ++D) {
        auto fam = solve_families(X, {Rat(R), Rat(D), 6});
        auto rm = solve_rmult(X, {Rat(R), Rat(D), 6});
        auto fam2 = solve_families(X, {Rat(2 * R), Rat(D), 6});
        if (fam.value && rm.value) CHECK(*fam.value <= *rm.value);
        if (rm.value && fam2.value) CHECK(*rm.value <= *fam2.value);
      }
}

TEST_CASE("solver monotonicity in R and D") {
  auto c6 = gen_cycle(6);
  auto val = [&](auto&& solver, long long R, long long D) {
    auto r = solver(c6, BudgetedDimensionQuery{Rat(R), Rat(D), 5}, SolveOptions{});
    return r.value ? *r.value : 99;
  };
  auto fam = [](const FiniteMetricSpace& X, const BudgetedDimensionQuery& q,
                const SolveOptions& o) { return solve_families(X, q, o); };
  auto ad = [](const FiniteMetricSpace& X, const BudgetedDimensionQuery& q,
               const SolveOptions& o) { return solve_ad(X, q, o); };
  auto rm = [](const FiniteMetricSpace& X, const BudgetedDimensionQuery& q,
               const SolveOptions& o) { return solve_rmult(X, q, o); };
  for (long long D = 1; D <= 3; ++D) {
    CHECK(val(fam, 1, D) <= val(fam, 2, D));
    CHECK(val(ad, 1, D) <= val(ad, 2, D));
    CHECK(val(rm, 1, D) <= val(rm, 2, D));
  }
  for (long long R = 1; R <= 2; ++R) {
    CHECK(val(fam, R, 2) >= val(fam, R, 3));
    CHECK(val(ad, R, 2) >= val(ad, R, 3));
    CHECK(val(rm, R, 2) >= val(rm, R, 3));
  }
}

TEST_CASE("box_allocate leaves a separated cover unchanged") {
  auto p6 = gen_path(6);
  std::vector<PointSet> cov = {{0, 1}, {4, 5}};  // gap of width 2 > R
  // not a cover of X, but the box allocator works on the input coverage
  auto tc = box_allocate(p6, cov, Rat(1));
  REQUIRE(tc.families.size() == 1);
  CHECK(tc.families[0] == cov);
}

TEST_CASE("box_allocate on the overlapping path cover") {
  auto p6 = gen_path(6);
  std::vector<PointSet> cov = {{0, 1}, {1, 2, 3}, {4, 5}};
  CHECK(r_multiplicity(p6, cov, Rat(1)) == 2);
  auto tc = box_allocate(p6, cov, Rat(1));
  CHECK(tc.families.size() == 2);
  auto chk = check_tagged_cover(p6, tc, Rat(1), std::nullopt);
  CHECK(chk.ok);
  // every piece sits inside an input set
  for (const auto& fam : tc.families)
    for (const auto& piece : fam) {
      bool inside = false;
      for (const auto& s : cov)
        if (std::includes(s.begin(), s.end(), piece.begin(), piece.end()))
          inside = true;
      CHECK(inside);
    }
}

TEST_CASE("box_allocate rejects an undersized box count") {
  auto p6 = gen_path(6);
  std::vector<PointSet> cov = {{0, 1}, {1, 2, 3}, {4, 5}};
  CHECK_THROWS_AS(box_allocate(p6, cov, Rat(1), 1), std::invalid_argument);
}

TEST_CASE("box_allocate property run on random graph covers") {
  std::mt19937 rng(20240803);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 5 + static_cast<int>(rng() % 16);
    // random connected graph: a spine plus extra edges
    std::vector<std::vector<long long>> adj(n, std::vector<long long>(n, 1 << 20));
    for (int i = 0; i < n; ++i) adj[i][i] = 0;
    auto edge = [&](int a, int b) { adj[a][b] = adj[b][a] = 1; };
    for (int i = 1; i < n; ++i) edge(static_cast<int>(rng() % i), i);
    for (int e = 0; e < n / 2; ++e)
      edge(static_cast<int>(rng() % n), static_cast<int>(rng() % n));
    for (int i = 0; i < n; ++i) adj[i][i] = 0;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          adj[i][j] = std::min(adj[i][j], adj[i][k] + adj[k][j]);
    std::vector<std::vector<Rat>> d(n, std::vector<Rat>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d[i][j] = Rat(adj[i][j]);
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
    FiniteMetricSpace X(names, d);

    // random cover: each point seeds a random small ball, then fill gaps
    std::vector<PointSet> cov;
    for (int s = 0; s < 3 + static_cast<int>(rng() % 4); ++s) {
      int c = static_cast<int>(rng() % n);
      cov.push_back(X.ball(c, Rat(static_cast<long long>(rng() % 3))));
    }
    std::vector<bool> seen(n, false);
    for (const auto& s : cov)
      for (int p : s) seen[p] = true;
    for (int p = 0; p < n; ++p)
      if (!seen[p]) cov.push_back({p});

    long long R = 1 + static_cast<long long>(rng() % 2);
    auto tc = box_allocate(X, cov, Rat(R));
    auto chk = check_tagged_cover(X, tc, Rat(R), std::nullopt);
    CHECK(chk.ok);
    if (!chk.ok) FAIL(chk.issue);
    for (const auto& fam : tc.families)
      for (const auto& piece : fam) {
        bool inside = false;
        for (const auto& s : cov)
          if (std::includes(s.begin(), s.end(), piece.begin(), piece.end()))
            inside = true;
        CHECK(inside);
      }
  }
}

TEST_CASE("greedy_families is a valid upper bound") {
  auto pt = gen_path(1);
  CHECK(greedy_families(pt, Rat(1), Rat(1)).first == 0);

  auto p8 = gen_path(8);
  auto [ub, cover] = greedy_families(p8, Rat(1), Rat(3));
  auto exact = solve_families(p8, {Rat(1), Rat(3), 8});
  REQUIRE(exact.value.has_value());
  CHECK(ub >= *exact.value);
  CHECK(check_tagged_cover(p8, cover, Rat(1), Rat(3)).ok);

  auto p30 = gen_path(30);
  auto [ub30, cover30] = greedy_families(p30, Rat(1), Rat(3));
  CHECK(check_tagged_cover(p30, cover30, Rat(1), Rat(3)).ok);
  CHECK(ub30 >= *exact.value);  // same structure truncated

  auto g55 = gen_grid({5, 5});
  auto [ubg, coverg] = greedy_families(g55, Rat(1), Rat(2));
  CHECK(ubg <= 8);
  CHECK(check_tagged_cover(g55, coverg, Rat(1), Rat(2)).ok);
}

TEST_CASE("cover json round trip") {
  auto p6 = gen_path(6);
  auto r = solve_families(p6, {Rat(1), Rat(2), 8});
  REQUIRE(r.value.has_value());
  auto back = cover_from_json(cover_to_json(r.tagged));
  CHECK(back.families == r.tagged.families);
}

TEST_CASE("exact solvers refuse oversized spaces") {
  auto big = gen_path(20);
  CHECK_THROWS_AS(solve_families(big, {Rat(1), Rat(2), 4}), std::length_error);
  SolveOptions wide;
  wide.max_points = 20;
  CHECK_NOTHROW(greedy_families(big, Rat(1), Rat(3)));
  (void)wide;
}

TEST_CASE("coarse separation respects both pair orders") {
  auto p2 = gen_path(2);
  // E contains only the ordered pair (0,1); with a diagonal bound the cells
  // are singletons, and {0},{1} must not share a family in either order
  Entourage E(p2, {{0, 1}});
  Entourage F = Entourage::diagonal(p2);
  auto r0 = solve_coarse(p2, E, F, 0);
  CHECK(!r0.value.has_value());
  auto r1 = solve_coarse(p2, E, F, 1);
  CHECK(r1.value == 1);
}

TEST_CASE("box_allocate accepts an oversized box count") {
  auto p6 = gen_path(6);
  std::vector<PointSet> cov = {{0, 1}, {1, 2, 3}, {4, 5}};
  auto tc = box_allocate(p6, cov, Rat(1), 4);
  CHECK(tc.families.size() == 4);
  CHECK(check_tagged_cover(p6, tc, Rat(1), std::nullopt).ok);
}
