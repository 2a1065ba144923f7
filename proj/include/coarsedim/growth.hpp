#pragma once

#include <map>
#include <optional>
#include <string>

#include "coarsedim/rational.hpp"

namespace coarsedim {

/// A sampled dimension function on a positive integer grid; nullopt marks
/// an infeasible scale.
struct DimensionCurve {
  std::map<long long, std::optional<int>> samples;
  std::string metadata;

  bool contains(long long R) const { return samples.count(R) > 0; }
  std::optional<int> at(long long R) const { return samples.at(R); }
  /// Non-decreasing over the finite entries.
  bool monotone() const;
  int finite_count() const;
};

struct PreceqWitness {
  int k = 0;
  long long window_lo = 0;  // tested sample range for x
  long long window_hi = 0;
};

/// Smallest k <= k_max with f(x) <= k*g(kx+k)+k over every sampled x > k
/// whose image kx+k lies in g's domain. Infeasible f-samples count as
/// +infinity (fail), infeasible g-samples as +infinity (pass). A verdict
/// only certifies the sampled window. Throws when every k has an empty
/// effective window.
std::optional<PreceqWitness> preceq_witness(const DimensionCurve& f,
                                            const DimensionCurve& g, int k_max);

enum class EquivKind { equivalent, only_fg, only_gf, incomparable };

struct EquivResult {
  EquivKind kind = EquivKind::incomparable;
  std::optional<PreceqWitness> fg, gf;
};

EquivResult equiv(const DimensionCurve& f, const DimensionCurve& g, int k_max);

enum class GrowthClass { constant, polynomial, exponential, inconclusive };

/// Heuristic growth-type call from least-squares fits; never a proof.
struct ClassifyResult {
  GrowthClass kind = GrowthClass::inconclusive;
  double estimate = 0.0;  // value (constant), degree (poly), rate (exp)
  double residual_constant = 0.0;
  double residual_polynomial = 0.0;
  double residual_exponential = 0.0;
  std::string note = "heuristic model selection";
};

/// Requires >= 5 finite samples. The log shift +1 is applied only when a
/// zero value is present (it would otherwise bias the degree estimate).
ClassifyResult classify(const DimensionCurve& f, double ambiguity = 0.2);

}  // namespace coarsedim
