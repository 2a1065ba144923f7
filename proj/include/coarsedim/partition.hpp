#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "coarsedim/groupoid.hpp"
#include "coarsedim/growth.hpp"

namespace coarsedim {

/// Left side of the admissibility inequality controlling the step count N:
/// (2p(f+1) + 2p(f+1)^{1/p+1}) / N, with f evaluated at N*R+1.
double pou_step_bound(int p, double f_value, double N);

int choose_p(double alpha);

struct ParamChoice {
  int p = 1;
  double c = 0.0;                 // exponent; 0 in direct-search mode
  double N_real = 0.0;            // N as a real (the exponent path can be huge)
  std::optional<long long> N;     // concrete N when it fits the working cap
  double lhs = 0.0;               // evaluated step bound at the returned N
};

/// Parameter selection for f(x) = ceil(x^alpha): p = floor(alpha/(1-alpha))+1,
/// c from the explicit max formula, N = ceil((R+1)^c); the returned values
/// satisfy the step-bound inequality strictly.
ParamChoice choose_parameters_alpha(double alpha, double R, double eps,
                                    long long n_cap = 1LL << 20);

/// Minimal N with the step bound below eps for a general non-decreasing f.
/// Throws when no N within the cap works.
ParamChoice choose_parameters_search(int p, const std::function<double(double)>& f,
                                     double R, double eps,
                                     long long n_cap = 1LL << 20);

/// Evaluates a sampled curve at arbitrary points by rounding up to the next
/// grid point (conservative for non-decreasing curves).
std::function<double(double)> curve_evaluator(const DimensionCurve& curve);

/// Nested chains U_i^(0) <= ... <= U_i^(N) of unit subsets. Levels are
/// stored per power exponent e = N - n; powers of K saturate quickly, so
/// only the distinct levels are materialized.
struct NestedFamilies {
  std::vector<int> K;
  long long N = 0;
  int e_cap = 0;       // largest materialized exponent
  bool saturated = false;  // K^(e_cap) is the fixed point
  std::vector<std::vector<std::vector<int>>> levels;  // [i][e] -> unit indices
  std::vector<std::vector<int>> base;                 // V_i = U_i^(N)

  int indices() const { return static_cast<int>(base.size()); }
  /// U_i^(n) as unit indices.
  std::vector<int> level_at(int i, long long n) const;
};

/// Builds the chains V_i^(n) = {x in V_i : src(K^(N-n) arriving at x) is
/// inside V_i} and verifies all four invariants (cover at level 0, nesting,
/// one-step containment, budget when given). Throws std::invalid_argument
/// when the base cover violates the level-0 covering requirement.
NestedFamilies nested_families(const FiniteGroupoid& G, const LengthFunction& len,
                               const std::vector<int>& K, long long N,
                               const std::vector<std::vector<int>>& base_cover,
                               const std::optional<Rat>& budget = std::nullopt);

enum class PouMode { p_power, flat };

struct PartitionOfUnity {
  PouMode mode = PouMode::p_power;
  int p = 1;
  long long N = 0;
  std::vector<std::vector<int>> supports;    // per index: unit indices
  std::vector<std::vector<Rat>> psi;         // per index, per unit; exact
  std::vector<std::vector<double>> phi;      // per index, per unit
  std::vector<std::vector<Rat>> phi_exact;   // flat mode only
};

/// psi_i = averaged chain indicators ((N - M_i)/N); p-power mode normalizes
/// by (sum psi^p)^(1/p), flat mode by sum psi (exact rationals).
PartitionOfUnity build_pou(const NestedFamilies& nf, int p, PouMode mode);

struct PouReport {
  bool pass = true;
  std::vector<std::string> failures;
  Rat max_psi_step{0};
  Rat psi_step_bound{0};       // 2/N
  double max_p_sum_step = 0;   // p * sum_i |phi_i(r) - phi_i(s)|, worst arrow
  double max_phi_step = 0;     // per-index variation, worst arrow
  double per_index_bound = 0;  // (2 + 2(d+1)^{1/p})/N
  double max_norm_defect = 0;
};

/// Full verification over the arrows of K: exact psi-step bound 2/N,
/// mode-specific epsilon bounds (strict), normalization, and supports.
PouReport verify_pou(const FiniteGroupoid& G, const LengthFunction& len,
                     const std::vector<int>& K, const PartitionOfUnity& pou,
                     double eps);

}  // namespace coarsedim
