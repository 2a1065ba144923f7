#include <random>
#include <set>

#include "coarsedim/json_io.hpp"
#include "coarsedim/space.hpp"
#include "doctest.h"

using namespace coarsedim;

TEST_CASE("path generator") {
  auto p1 = gen_path(1);
  CHECK(p1.size() == 1);
  CHECK(p1.dist(0, 0) == Rat(0));

  auto p3 = gen_path(3);
  CHECK(p3.dist(0, 2) == Rat(2));
  CHECK(p3.dist(2, 0) == Rat(2));
  CHECK_THROWS_AS(gen_path(0), std::invalid_argument);
}

TEST_CASE("cycle and grid generators") {
  auto c6 = gen_cycle(6);
  CHECK(c6.dist(0, 3) == Rat(3));
  CHECK(c6.dist(0, 5) == Rat(1));
  CHECK(c6.diameter() == Rat(3));

  auto g = gen_grid({3, 4});
  CHECK(g.size() == 12);
  // corner to corner walks both axes
  CHECK(g.dist(0, 11) == Rat(2 + 3));

  GenOptions tight;
  tight.point_cap = 10;
  CHECK_THROWS_AS(gen_grid({4, 4}, tight), std::length_error);
}

TEST_CASE("weighted direct sum ball") {
  auto s = gen_dirsum({1, 2}, 2);
  // tuples with |a1| + 2|a2| <= 2
  CHECK(s.size() == 7);
  int i10 = -1, i01 = -1;
  for (int i = 0; i < s.size(); ++i) {
    if (s.points()[i] == "(1,0)") i10 = i;
    if (s.points()[i] == "(0,1)") i01 = i;
  }
  REQUIRE(i10 >= 0);
  REQUIRE(i01 >= 0);
  CHECK(s.dist(i10, i01) == Rat(3));  // 1*1 + 2*1

  CHECK_THROWS_AS(gen_dirsum({2, 1}, 2), std::invalid_argument);
  CHECK_THROWS_AS(gen_dirsum({0}, 2), std::invalid_argument);
}

TEST_CASE("cayley balls") {
  auto z12 = gen_cayley_ball(Group::cyclic(12), Rat(6));
  CHECK(z12.size() == 12);

  auto zb = gen_cayley_ball(Group::zball(4), Rat(2));
  CHECK(zb.size() == 5);
  // word metric on the segment is the usual distance
  CHECK(zb.dist(0, 4) == Rat(4));
  // ball too small for the pairwise products
  CHECK_THROWS_AS(gen_cayley_ball(Group::zball(2), Rat(2)), std::invalid_argument);

  auto z2 = gen_cayley_ball(Group::z2ball(4), Rat(2));
  CHECK(z2.size() == 13);
}

TEST_CASE("metric axioms hold on generated spaces") {
  // constructing re-validates; just exercise a spread of generators
  CHECK_NOTHROW(gen_path(9));
  CHECK_NOTHROW(gen_cycle(9));
  CHECK_NOTHROW(gen_grid({2, 2, 3}));
  CHECK_NOTHROW(gen_dirsum({1, 3, 5}, 4));
  CHECK_NOTHROW(gen_cayley_ball(Group::abelian({2, 2}), Rat(2)));

  // and that validation actually rejects a broken triangle
  std::vector<std::vector<Rat>> bad = {
      {Rat(0), Rat(1), Rat(5)}, {Rat(1), Rat(0), Rat(1)}, {Rat(5), Rat(1), Rat(0)}};
  CHECK_THROWS_AS(FiniteMetricSpace({"a", "b", "c"}, bad), std::invalid_argument);
}

TEST_CASE("entourage tubes") {
  auto p3 = gen_path(3);
  auto e1 = Entourage::tube(p3, Rat(1));
  CHECK(e1.pair_count() == 7);  // diagonal + 2*2 adjacencies

  auto p4 = gen_path(4);
  CHECK(Entourage::tube(p4, Rat(2)).pair_count() == 14);

  auto e0 = Entourage::tube(p4, Rat(0));
  CHECK(e0 == Entourage::diagonal(p4));

  auto open1 = Entourage::tube(p4, Rat(1), /*closed=*/false);
  CHECK(open1 == Entourage::diagonal(p4));
}

TEST_CASE("entourage composition and inversion") {
  auto p5 = gen_path(5);
  auto e1 = Entourage::tube(p5, Rat(1));
  auto e2 = Entourage::tube(p5, Rat(2));
  auto c = entourage_compose(e1, e1);
  CHECK(c.subset_of(e2));
  CHECK(c == e2);  // on a path the tube composition is attained

  CHECK(entourage_invert(e1) == e1);
  CHECK(entourage_compose(e1, Entourage::diagonal(p5)) == e1);

  auto q = gen_cycle(5);
  CHECK_THROWS_AS(entourage_compose(e1, Entourage::tube(q, Rat(1))),
                  std::invalid_argument);
}

TEST_CASE("tube monotonicity and composition bound across generators") {
  std::vector<FiniteMetricSpace> spaces;
  spaces.push_back(gen_path(6));
  spaces.push_back(gen_cycle(7));
  spaces.push_back(gen_grid({3, 3}));
  spaces.push_back(gen_dirsum({1, 2}, 3));
  for (const auto& X : spaces) {
    for (long long R = 0; R <= 3; ++R)
      for (long long S = R; S <= 4; ++S) {
        auto eR = Entourage::tube(X, Rat(R));
        auto eS = Entourage::tube(X, Rat(S));
        CHECK(eR.subset_of(eS));
        CHECK(entourage_compose(eR, eS).subset_of(Entourage::tube(X, Rat(R + S))));
      }
  }
}

TEST_CASE("space json round trip") {
  auto s = gen_dirsum({1, 2}, 2);
  auto back = space_from_json(space_to_json(s));
  CHECK(back.size() == s.size());
  CHECK(back.fingerprint() == s.fingerprint());

  // rational distances survive the trip
  std::vector<std::vector<Rat>> half = {{Rat(0), Rat(1, 2)}, {Rat(1, 2), Rat(0)}};
  FiniteMetricSpace tiny({"a", "b"}, half);
  auto t2 = space_from_json(space_to_json(tiny));
  CHECK(t2.dist(0, 1) == Rat(1, 2));
}

TEST_CASE("dirsum respects the point cap") {
  GenOptions tight;
  tight.point_cap = 5;
  CHECK_THROWS_AS(gen_dirsum({1, 2}, 2, tight), std::length_error);
}
