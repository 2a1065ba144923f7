#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coarsedim/dynamics.hpp"
#include "coarsedim/partition.hpp"

namespace coarsedim {

enum class WitnessProvenance { exact_fiber, assembled_flat, assembled_p_power, user };

std::string provenance_name(WitnessProvenance p);

/// A [0,1]-valued function on arrows with its support. Exact rational
/// values accompany the doubles whenever the construction allows.
struct AmenabilityWitness {
  std::vector<double> mu;
  std::optional<std::vector<Rat>> mu_exact;
  std::vector<int> support;
  WitnessProvenance provenance = WitnessProvenance::user;
};

struct AmenabilityReport {
  bool pass = true;
  bool exact_mode = false;
  double max_fiber_excess = 0.0;       // condition (1): worst max(0, sum-1)
  double max_unit_defect = 0.0;        // condition (2): worst |1 - sum|
  double max_invariance_defect = 0.0;  // condition (3): worst translation sum
  std::optional<Rat> exact_unit_defect;
  std::optional<Rat> exact_invariance_defect;
  std::string note = "fiber sums taken over source fibers";
  std::vector<std::string> failures;
};

/// Checks the three amenability conditions of mu against the arrow set K at
/// tolerance eps (strict); gk is the composition comp(g,k), read as 0 when
/// undefined in a partial model.
AmenabilityReport check_amenability(const FiniteGroupoid& G,
                                    const AmenabilityWitness& mu,
                                    const std::vector<int>& K, double eps);

/// mu(g) = 1 / |s-fiber through src(g)|: the invariant fiber weight of a
/// finite groupoid. Slack is exactly zero on its own groupoid.
AmenabilityWitness exact_witness(const FiniteGroupoid& H);

/// Same weight computed inside an arrow subset of a larger groupoid,
/// extended by zero outside it.
AmenabilityWitness exact_witness_on(const FiniteGroupoid& G,
                                    const std::vector<int>& sub_arrows);

/// mu(g) = sum_i phi_i(src g) mu_i(g) (flat) or sum_i phi_i(src g)^p mu_i(g)
/// (p-power). Each mu_i must be supported in the subgroupoid generated by
/// the K-arrows with endpoints in cover set i.
AmenabilityWitness assemble_witness(const FiniteGroupoid& G,
                                    const std::vector<int>& K,
                                    const std::vector<std::vector<int>>& cover,
                                    const PartitionOfUnity& pou,
                                    const std::vector<AmenabilityWitness>& mu_i,
                                    PouMode mode);

struct PipelineOptions {
  Rat R{1};
  double eps = 0.5;
  std::optional<double> alpha;  // set: p-power mode; unset: flat mode
  int m_max = 8;
  std::optional<Rat> budget;
  long long n_cap = 1LL << 20;
};

struct PipelineResult {
  bool pass = false;
  std::string failed_stage;  // empty unless a stage could not produce output
  ParamChoice params;
  long long N = 0;
  DadResult base;
  PouReport pou_report;
  AmenabilityReport final_report;
  PartitionOfUnity pou;
  AmenabilityWitness witness;
  std::vector<std::vector<int>> cover;
};

/// End to end: parameters, budget-constrained base cover with the orbit
/// condition at the enlarged generator set, nested chains, partition of
/// unity, exact sub-witnesses, assembly, final check.
PipelineResult amenability_pipeline(const FiniteGroupoid& G,
                                    const LengthFunction& len,
                                    const PipelineOptions& opts);

}  // namespace coarsedim
