#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coarsedim/cover.hpp"
#include "coarsedim/groupoid.hpp"

namespace coarsedim {

struct DadQuery {
  std::vector<int> generators;   // arrow set K
  std::optional<Rat> budget;     // B; nullopt = unbounded
  int m_max = 8;
  bool orbit_condition = false;  // every partial orbit inside one cover set
};

struct DadResult {
  std::optional<int> value;              // nullopt: infeasible within m_max
  std::vector<std::vector<int>> cover;   // witness sets (points / unit indices)
  bool exact = true;
};

struct StayInResult {
  std::vector<int> elements;     // group element indices, sorted
  bool budget_exceeded = false;  // a product left a partial ball
};

/// All group elements expressible as products of E-steps along which some
/// starting point of U never leaves U. E must be symmetric and contain the
/// identity.
StayInResult stay_in_set(const GroupAction& action, const std::vector<int>& U,
                         const std::vector<int>& E);

/// Smallest m <= m_max admitting a cover {U_0..U_m} of the points whose
/// stay-in sets lie inside the word-length ball of radius B. Exact up to
/// `exact_cap` points, greedy beyond (flagged in the result).
DadResult dad_action(const GroupAction& action, const std::vector<int>& E,
                     const std::optional<Rat>& B, int m_max,
                     int exact_cap = 16);

/// Smallest m <= m_max admitting a cover {U_0..U_m} of the unit space such
/// that the subgroupoid generated by the K-arrows with both endpoints in
/// U_i stays within the length budget. Witness sets are unit indices.
DadResult dad_groupoid(const FiniteGroupoid& G, const LengthFunction& len,
                       const DadQuery& q, int exact_cap = 16);

struct CrosscheckReport {
  bool ok = false;
  std::string detail;
  std::vector<std::optional<int>> values;
  DadResult action_side;
  DadResult groupoid_side;
  SolveResult coarse_side;
  SolveResult families_side;
};

/// Runs the action solver and the groupoid solver on the transformation
/// groupoid with matched parameters (K = {len < R}, same B) and asserts
/// equality.
CrosscheckReport crosscheck_lemma412(const GroupAction& action, const Rat& R,
                                     const std::optional<Rat>& B, int m_max);

/// Asserts dad(pair groupoid, K = E_R arrows, B = D) = solve_coarse(E_R,
/// E_D) = solve_families(R, D), and validates the two witness translations
/// (orbit classes -> families, family unions -> cover).
CrosscheckReport crosscheck_thm416(const FiniteMetricSpace& X, const Rat& R,
                                   const Rat& D, int m_max);

struct ProbMeasure {
  std::vector<double> weights;
  void validate() const;  // non-negative, sums to 1 within 1e-9
};

/// max over g in E and x of || f(gx) - g.f(x) ||_1, where the vertex action
/// permutes measure coordinates.
double equivariance_defect(const GroupAction& on_points,
                           const GroupAction& on_vertices,
                           const std::vector<ProbMeasure>& f,
                           const std::vector<int>& E);

}  // namespace coarsedim
