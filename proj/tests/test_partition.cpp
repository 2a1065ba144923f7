#include <cmath>

#include "coarsedim/partition.hpp"
#include "doctest.h"

using namespace coarsedim;

namespace {

std::vector<int> tube_arrows(const FiniteMetricSpace& X, long long R) {
  std::vector<int> out;
  for (int x = 0; x < X.size(); ++x)
    for (int y = 0; y < X.size(); ++y)
      if (X.dist(x, y) <= Rat(R)) out.push_back(pair_arrow(X, x, y));
  return out;
}

std::vector<int> iota_vec(int lo, int hi) {
  std::vector<int> v;
  for (int i = lo; i <= hi; ++i) v.push_back(i);
  return v;
}

}  // namespace

TEST_CASE("p from the growth exponent") {
  CHECK(choose_p(0.5) == 2);
  CHECK(choose_p(0.3) == 1);
  CHECK(choose_p(0.7) == 3);
  CHECK_THROWS_AS(choose_p(1.0), std::invalid_argument);
}

TEST_CASE("exponent-path parameters satisfy the step bound on a grid") {
  for (double alpha : {0.3, 0.5, 0.7})
    for (double R : {1.0, 2.0, 4.0})
      for (double eps : {0.5, 0.1}) {
        auto pc = choose_parameters_alpha(alpha, R, eps, 1LL << 62);
        CHECK(pc.p == choose_p(alpha));
        CHECK(pc.N_real == std::ceil(std::pow(R + 1.0, pc.c)));
        double f = std::ceil(std::pow(pc.N_real * R + 1.0, alpha));
        CHECK(pou_step_bound(pc.p, f, pc.N_real) < eps);
      }
}

TEST_CASE("direct search finds the minimal admissible N") {
  auto zero = [](double) { return 0.0; };
  auto pc = choose_parameters_search(2, zero, 1.0, 1.0);
  REQUIRE(pc.N.has_value());
  CHECK(*pc.N == 9);  // (2p + 2p)/N < 1 forces N >= 9 at p = 2
  CHECK(pou_step_bound(2, 0.0, 8.0) >= 1.0);

  CHECK_THROWS_AS(choose_parameters_search(2, [](double) { return 1e9; }, 1.0,
                                           1.0, 100),
                  std::runtime_error);
}

TEST_CASE("nested families on a single-set base cover") {
  auto X = gen_path(5);
  auto [G, len] = build_pair_groupoid(X);
  auto nf = nested_families(G, len, tube_arrows(X, 1), 3, {iota_vec(0, 4)});
  CHECK(nf.indices() == 1);
  for (long long n = 0; n <= 3; ++n) CHECK(nf.level_at(0, n) == iota_vec(0, 4));
}

TEST_CASE("nested families reject a base cover without the orbit margin") {
  auto X = gen_path(6);
  auto [G, len] = build_pair_groupoid(X);
  // the shrunk chains of {0..3} and {2..5} leave the middle uncovered
  CHECK_THROWS_WITH_AS(
      nested_families(G, len, tube_arrows(X, 1), 2, {iota_vec(0, 3), iota_vec(2, 5)}),
      doctest::Contains("orbit condition"), std::invalid_argument);
}

TEST_CASE("nested families chains on a long path") {
  auto X = gen_path(20);
  auto [G, len] = build_pair_groupoid(X);
  auto K = tube_arrows(X, 1);
  auto nf = nested_families(G, len, K, 2, {iota_vec(0, 13), iota_vec(8, 19)},
                            Rat(13));
  CHECK(nf.indices() == 2);
  CHECK(nf.level_at(0, 0) == iota_vec(0, 11));
  CHECK(nf.level_at(1, 0) == iota_vec(10, 19));
  CHECK(nf.level_at(0, 1) == iota_vec(0, 12));
  CHECK(nf.level_at(0, 2) == iota_vec(0, 13));

  // one-step containment, checked here independently of the constructor
  for (int i = 0; i < 2; ++i)
    for (long long n = 0; n < 2; ++n) {
      auto from = nf.level_at(i, n);
      auto to = nf.level_at(i, n + 1);
      for (int g : K) {
        int rx = G.unit_index(G.rng(g));
        if (std::binary_search(from.begin(), from.end(), rx))
          CHECK(std::binary_search(to.begin(), to.end(),
                                   G.unit_index(G.src(g))));
      }
    }
}

TEST_CASE("partition of unity on the trivial chain") {
  auto X = gen_path(5);
  auto [G, len] = build_pair_groupoid(X);
  auto K = tube_arrows(X, 1);
  auto nf = nested_families(G, len, K, 4, {iota_vec(0, 4)});
  auto pou = build_pou(nf, 2, PouMode::p_power);
  for (int u = 0; u < 5; ++u) {
    CHECK(pou.psi[0][u] == Rat(1));
    CHECK(pou.phi[0][u] == doctest::Approx(1.0));
  }
  auto rep = verify_pou(G, len, K, pou, 1e-6);
  CHECK(rep.pass);
  CHECK(rep.max_psi_step == Rat(0));
  CHECK(rep.max_p_sum_step == 0.0);
}

TEST_CASE("partition of unity on the two-chain path") {
  auto X = gen_path(20);
  auto [G, len] = build_pair_groupoid(X);
  auto K = tube_arrows(X, 1);
  auto nf = nested_families(G, len, K, 2, {iota_vec(0, 13), iota_vec(8, 19)});

  SUBCASE("p-power mode") {
    auto pou = build_pou(nf, 2, PouMode::p_power);
    // a point only ever in the first chain carries the whole weight
    CHECK(pou.phi[0][0] == doctest::Approx(1.0));
    CHECK(pou.phi[1][0] == doctest::Approx(0.0));
    for (int u = 0; u < 20; ++u) {
      double s = 0;
      for (int i = 0; i < 2; ++i) s += std::pow(pou.phi[i][u], 2);
      CHECK(std::abs(s - 1.0) <= 1e-9);
    }
    auto rep = verify_pou(G, len, K, pou, 10.0);
    CHECK(rep.pass);
    CHECK(rep.max_psi_step <= Rat(2, 2));
    CHECK(rep.max_phi_step <= rep.per_index_bound + 1e-12);

    auto tight = verify_pou(G, len, K, pou, 1e-4);
    CHECK(!tight.pass);  // N = 2 cannot meet a 1e-4 budget
  }

  SUBCASE("flat mode") {
    auto pou = build_pou(nf, 1, PouMode::flat);
    REQUIRE(!pou.phi_exact.empty());
    for (int u = 0; u < 20; ++u) {
      Rat s(0);
      for (int i = 0; i < 2; ++i) s += pou.phi_exact[i][u];
      CHECK(s == Rat(1));
    }
    auto rep = verify_pou(G, len, K, pou, 10.0);
    CHECK(rep.pass);
  }
}

TEST_CASE("psi steps respect the exact 2/N bound across instances") {
  auto X = gen_cycle(12);
  auto [G, len] = build_pair_groupoid(X);
  auto K = tube_arrows(X, 1);
  // valid base cover: two length-10 arcs, so the shrunk chains still cover
  std::vector<int> arc1, arc2;
  for (int i = 0; i <= 9; ++i) arc1.push_back(i);
  for (int i = 6; i <= 15; ++i) arc2.push_back(i % 12);
  std::sort(arc2.begin(), arc2.end());
  auto nf = nested_families(G, len, K, 2, {arc1, arc2});
  auto pou = build_pou(nf, 2, PouMode::p_power);
  auto rep = verify_pou(G, len, K, pou, 100.0);
  CHECK(rep.pass);
  CHECK(rep.psi_step_bound == Rat(1));  // 2/N with N = 2
  CHECK(rep.max_psi_step <= Rat(1));
}

TEST_CASE("curve evaluator rounds up to the next sample") {
  DimensionCurve c;
  c.samples[1] = 1;
  c.samples[5] = 2;
  c.samples[25] = 3;
  auto f = curve_evaluator(c);
  CHECK(f(1.0) == 1.0);
  CHECK(f(2.0) == 2.0);
  CHECK(f(25.0) == 3.0);
  CHECK_THROWS_AS(f(26.0), std::runtime_error);
}
