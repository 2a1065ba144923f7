#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "coarsedim/group.hpp"
#include "coarsedim/rational.hpp"
#include "coarsedim/space.hpp"

namespace coarsedim {

/// A finite groupoid: arrows with source/range among the unit arrows, a
/// partial composition and a total inverse. In partial mode (balls of
/// infinite groups) a composition may be undefined even when endpoints
/// match; downstream budget logic treats that as budget-exceeded.
class FiniteGroupoid {
 public:
  FiniteGroupoid(std::vector<int> src, std::vector<int> rng,
                 std::vector<int> inv, std::vector<std::pair<std::pair<int, int>, int>> comp,
                 std::vector<std::string> labels, bool partial = false);

  int size() const { return static_cast<int>(src_.size()); }
  bool partial() const { return partial_; }
  bool is_unit(int g) const { return src_[g] == g && rng_[g] == g; }
  const std::vector<int>& units() const { return units_; }
  int n_units() const { return static_cast<int>(units_.size()); }
  /// Index of a unit arrow within units(), -1 for non-units.
  int unit_index(int g) const { return unit_index_[g]; }

  int src(int g) const { return src_[g]; }
  int rng(int g) const { return rng_[g]; }
  int inv(int g) const { return inv_[g]; }
  /// comp(a,b) for src(a) = rng(b); -1 when undefined.
  int compose(int a, int b) const;
  const std::string& label(int g) const { return labels_[g]; }

  const std::vector<int>& arrows_with_src(int unit_arrow) const;
  const std::vector<int>& arrows_with_rng(int unit_arrow) const;

  /// Full axiom check: unit laws, inverse laws, composability domain,
  /// associativity over all composable triples. Throws on violation.
  void validate() const;

 private:
  std::vector<int> src_, rng_, inv_;
  std::unordered_map<std::uint64_t, int> comp_;
  std::vector<std::string> labels_;
  bool partial_;
  std::vector<int> units_;
  std::vector<int> unit_index_;
  std::vector<std::vector<int>> by_src_, by_rng_;  // indexed by unit_index
};

struct LengthFunction {
  std::vector<Rat> values;
  const Rat& operator()(int g) const { return values[g]; }
};

/// Length axioms: zero exactly on units, symmetric, subadditive wherever
/// composition is defined. Throws on violation.
void validate_length(const FiniteGroupoid& G, const LengthFunction& len);

/// {g : len(g) < R}; symmetric and containing all units for R > 0.
std::vector<int> arrows_below_length(const FiniteGroupoid& G,
                                     const LengthFunction& len, const Rat& R);

struct GroupAction {
  Group group;
  std::vector<std::string> point_names;
  std::vector<std::vector<int>> act;  // act[gamma][x]

  int n_points() const { return static_cast<int>(point_names.size()); }
  int apply(int gamma, int x) const { return act[gamma][x]; }
  void validate() const;

  static GroupAction rotation(int n);
  static GroupAction regular(const Group& g);
  static GroupAction trivial_on(int k);
};

/// Pair groupoid of a finite space: arrows (x,y), r(x,y)=x, s(x,y)=y,
/// (x,y)(y,z)=(x,z), with length d(x,y). This is the finite-scale model of
/// the coarse groupoid of the space.
std::pair<FiniteGroupoid, LengthFunction> build_pair_groupoid(
    const FiniteMetricSpace& X);

/// Transformation groupoid of an action: arrows (gamma x, gamma, x) with
/// length the word length of gamma.
std::pair<FiniteGroupoid, LengthFunction> build_transformation_groupoid(
    const GroupAction& action);

/// Arrow id of the pair-groupoid arrow (x,y).
inline int pair_arrow(const FiniteMetricSpace& X, int x, int y) {
  return x * X.size() + y;
}

struct ArrowSetResult {
  std::vector<int> arrows;       // sorted
  bool hit_undefined = false;    // a composition left a partial model
};

/// Smallest subset containing S, its endpoint units, closed under inverse
/// and composition.
ArrowSetResult generate_subgroupoid(const FiniteGroupoid& G,
                                    const std::vector<int>& S);

/// {ab : a in A, b in B, s(a) = r(b), ab defined}.
ArrowSetResult arrow_product_set(const FiniteGroupoid& G,
                                 const std::vector<int>& A,
                                 const std::vector<int>& B);

/// n-fold product A * ... * A; power 0 is the unit set. Detects the fixed
/// point so very large exponents are cheap for unit-containing A.
ArrowSetResult arrow_power(const FiniteGroupoid& G, const std::vector<int>& A,
                           long long n);

/// G with one added isolated unit and no new compositions.
std::pair<FiniteGroupoid, LengthFunction> alexandrov(
    const FiniteGroupoid& G, const LengthFunction& len);

std::vector<int> s_fiber(const FiniteGroupoid& G, int unit_arrow);
std::vector<int> r_fiber(const FiniteGroupoid& G, int unit_arrow);

}  // namespace coarsedim
