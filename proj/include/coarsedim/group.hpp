#pragma once

#include <string>
#include <vector>

#include "coarsedim/rational.hpp"

namespace coarsedim {

/// A finite group given by its multiplication table, or a finite symmetric
/// ball inside an infinite group. In the partial case, products that leave
/// the ball are recorded as undefined (-1); inverses and products with the
/// identity always stay inside.
struct Group {
  std::vector<std::string> elems;
  int identity = 0;
  std::vector<std::vector<int>> mult;  // mult[a][b], -1 when undefined
  std::vector<int> inv;
  std::vector<Rat> length;  // word length, zero exactly at the identity
  bool partial = false;

  int size() const { return static_cast<int>(elems.size()); }

  /// a*b, or -1 when the product leaves a partial ball.
  int product(int a, int b) const { return mult[a][b]; }

  /// Checks identity/inverse/length axioms and associativity. Associativity
  /// is checked on all triples for small groups and on a deterministic
  /// sample otherwise; a violated sample throws std::invalid_argument.
  void validate() const;

  static Group trivial();
  static Group cyclic(int n);
  /// Direct product of cyclic groups; generators are +-1 in each factor,
  /// so the word length is the sum of per-factor cyclic word lengths.
  static Group abelian(const std::vector<int>& orders);
  /// The ball {-radius..radius} in Z with partial addition.
  static Group zball(long long radius);
  /// The l1 ball of the given radius in Z^2 with partial addition.
  static Group z2ball(long long radius);
};

}  // namespace coarsedim
