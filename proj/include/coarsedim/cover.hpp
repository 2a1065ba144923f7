#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coarsedim/space.hpp"

namespace coarsedim {

using PointSet = std::vector<int>;  // sorted point indices

/// A cover split into indexed families of point subsets.
struct TaggedCover {
  std::vector<std::vector<PointSet>> families;

  std::vector<PointSet> flat() const;
  std::vector<int> covered_points(int space_size) const;
};

/// Outcome of validating a tagged cover against separation/diameter budgets.
struct CoverCheck {
  bool ok = true;
  std::string issue;
};

/// Checks: sets non-empty and inside the space, each family R-disjoint
/// (cross distance strictly > R), diameters <= D when given, and coverage of
/// `target` (all points when target is empty).
CoverCheck check_tagged_cover(const FiniteMetricSpace& X, const TaggedCover& tc,
                              const Rat& R, const std::optional<Rat>& D,
                              const std::vector<int>& target = {});

struct CoverStats {
  /// Largest realized distance value r such that every subset of diameter
  /// <= r lies inside some cover set; nullopt when every subset fits.
  std::optional<Rat> lebesgue;
  int multiplicity = 0;
  Rat max_diameter{0};
  std::optional<int> r_multiplicity;
};

/// Brute-force statistics; the Lebesgue scan is exponential in |X| and is
/// capped (throws std::length_error beyond the cap).
CoverStats cover_stats(const FiniteMetricSpace& X,
                       const std::vector<PointSet>& cover,
                       const std::optional<Rat>& R = std::nullopt);

/// max over x of the number of cover sets meeting the closed ball B(x,R).
int r_multiplicity(const FiniteMetricSpace& X,
                   const std::vector<PointSet>& cover, const Rat& R);

struct BudgetedDimensionQuery {
  Rat R{0};      // separation / Lebesgue scale
  Rat D{0};      // diameter budget
  int m_max = 8; // search ceiling
};

struct SolveOptions {
  int max_points = 16;  // exact solvers refuse larger spaces
};

struct SolveResult {
  std::optional<int> value;        // nullopt: infeasible within m_max
  std::vector<PointSet> cover;     // flat witness (ad / rmult)
  TaggedCover tagged;              // tagged witness (families / coarse)
};

/// Smallest n <= m_max admitting a cover with max diameter <= D, Lebesgue
/// number strictly greater than R, and multiplicity <= n+1.
SolveResult solve_ad(const FiniteMetricSpace& X, const BudgetedDimensionQuery& q,
                     const SolveOptions& opts = {});

/// Smallest n <= m_max admitting a cover with max diameter <= D and
/// R-multiplicity <= n+1.
SolveResult solve_rmult(const FiniteMetricSpace& X,
                        const BudgetedDimensionQuery& q,
                        const SolveOptions& opts = {});

/// Smallest n <= m_max admitting n+1 R-disjoint families of diameter-<=D
/// sets covering X; returns a witness.
SolveResult solve_families(const FiniteMetricSpace& X,
                           const BudgetedDimensionQuery& q,
                           const SolveOptions& opts = {});

/// Smallest m <= m_max admitting a cover split into m+1 E-separated
/// families with every set F-bounded.
SolveResult solve_coarse(const FiniteMetricSpace& X, const Entourage& E,
                         const Entourage& F_budget, int m_max,
                         const SolveOptions& opts = {});

/// Allocates a flat cover with m_R <= boxes into `boxes` pairwise
/// R-disjoint families: irreducible subcover, box seeding, then piecewise
/// splitting of the remaining sets. boxes defaults to m_R of the input.
TaggedCover box_allocate(const FiniteMetricSpace& X,
                         const std::vector<PointSet>& cover, const Rat& R,
                         std::optional<int> boxes = std::nullopt);

/// Clusters the space into diameter-<=D cells, greedily colors the
/// conflict graph (cells at distance <= R), and returns (colors-1, cover).
/// Always an upper bound for solve_families.
std::pair<int, TaggedCover> greedy_families(const FiniteMetricSpace& X,
                                            const Rat& R, const Rat& D);

}  // namespace coarsedim
