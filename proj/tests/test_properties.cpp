// Randomized cross-solver properties on small random graph metrics, plus
// exhaustive-cover oracles for the two flat-cover solvers on tiny spaces.

#include <functional>
#include <random>

#include "coarsedim/cover.hpp"
#include "coarsedim/dynamics.hpp"
#include "doctest.h"

using namespace coarsedim;

namespace {

FiniteMetricSpace random_graph_space(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<std::vector<long long>> adj(n, std::vector<long long>(n, 1 << 20));
  auto edge = [&](int a, int b) {
    if (a != b) adj[a][b] = adj[b][a] = 1;
  };
  for (int i = 1; i < n; ++i) edge(static_cast<int>(rng() % i), i);
  for (int e = 0; e < n; ++e)
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

// every way to choose up to `max_sets` candidate subsets, checked by a
// caller-supplied cover predicate; returns the smallest count that works
std::optional<int> exhaustive_cover(int n,
                                    const std::function<bool(const std::vector<unsigned>&)>& ok,
                                    int max_sets) {
  std::vector<unsigned> all;
  for (unsigned s = 1; s < (1u << n); ++s) all.push_back(s);
  std::vector<unsigned> pick;
  std::function<bool(std::size_t, int)> rec = [&](std::size_t from, int left) {
    unsigned covered = 0;
    for (unsigned s : pick) covered |= s;
    if (covered + 1 == (1u << n) && ok(pick)) return true;
    if (left == 0) return false;
    for (std::size_t i = from; i < all.size(); ++i) {
      pick.push_back(all[i]);
      if (rec(i + 1, left - 1)) return true;
      pick.pop_back();
    }
    return false;
  };
  for (int t = 1; t <= max_sets; ++t) {
    pick.clear();
    if (rec(0, t)) return t;
  }
  return std::nullopt;
}

std::vector<PointSet> to_sets(const std::vector<unsigned>& masks) {
  std::vector<PointSet> out;
  for (unsigned m : masks) {
    PointSet s;
    for (int p = 0; p < 31; ++p)
      if (m & (1u << p)) s.push_back(p);
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("coarse and families solvers agree on random graph metrics") {
  for (unsigned seed = 1; seed <= 12; ++seed) {
    int n = 4 + static_cast<int>(seed % 5);
    auto X = random_graph_space(n, 5000 + seed);
    for (long long R = 1; R <= 2; ++R)
      for (long long D = 1; D <= 3; ++D) {
        BudgetedDimensionQuery q{Rat(R), Rat(D), 6};
        auto fam = solve_families(X, q);
        auto coa = solve_coarse(X, Entourage::tube(X, Rat(R)),
                                Entourage::tube(X, Rat(D)), 6);
        CHECK(fam.value == coa.value);
        auto rm = solve_rmult(X, q);
        auto fam2 = solve_families(X, {Rat(2 * R), Rat(D), 6});
        if (fam.value && rm.value) CHECK(*fam.value <= *rm.value);
        if (rm.value && fam2.value) CHECK(*rm.value <= *fam2.value);
      }
  }
}

TEST_CASE("pair-groupoid triple equality on random graph metrics") {
  for (unsigned seed = 1; seed <= 6; ++seed) {
    int n = 5 + static_cast<int>(seed % 4);
    auto X = random_graph_space(n, 7000 + seed);
    for (long long R = 1; R <= 2; ++R) {
      auto rep = crosscheck_thm416(X, Rat(R), Rat(R + 1), 6);
      CHECK(rep.ok);
    }
  }
}

TEST_CASE("solve_rmult against exhaustive cover enumeration") {
  for (unsigned seed = 1; seed <= 8; ++seed) {
    auto X = random_graph_space(4, 300 + seed);
    for (long long R = 1; R <= 2; ++R)
      for (long long D = 1; D <= 2; ++D) {
        for (int nn = 0; nn <= 2; ++nn) {
          auto ok = [&](const std::vector<unsigned>& masks) {
            auto sets = to_sets(masks);
            for (const auto& s : sets)
              if (X.set_diameter(s) > Rat(D)) return false;
            return r_multiplicity(X, sets, Rat(R)) <= nn + 1;
          };
          // feasibility within the ceiling is what the solvers decide;
          // six sets exhaust the useful covers of four points
          bool oracle_feasible = exhaustive_cover(4, ok, 6).has_value();
          auto got = solve_rmult(X, {Rat(R), Rat(D), nn});
          CHECK(got.value.has_value() == oracle_feasible);
        }
      }
  }
}

TEST_CASE("solve_ad against exhaustive cover enumeration") {
  for (unsigned seed = 1; seed <= 8; ++seed) {
    auto X = random_graph_space(4, 900 + seed);
    for (long long R = 1; R <= 2; ++R)
      for (long long D = 2; D <= 3; ++D)
        for (int nn = 0; nn <= 2; ++nn) {
          auto ok = [&](const std::vector<unsigned>& masks) {
            auto sets = to_sets(masks);
            for (const auto& s : sets)
              if (X.set_diameter(s) > Rat(D)) return false;
            auto st = cover_stats(X, sets);
            if (st.multiplicity > nn + 1) return false;
            return !st.lebesgue.has_value() || *st.lebesgue > Rat(R);
          };
          bool oracle_feasible = exhaustive_cover(4, ok, 6).has_value();
          auto got = solve_ad(X, {Rat(R), Rat(D), nn});
          CHECK(got.value.has_value() == oracle_feasible);
        }
  }
}
