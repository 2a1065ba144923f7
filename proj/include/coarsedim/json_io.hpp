#pragma once

#include <string>
#include <utility>

#include "coarsedim/amenability.hpp"
#include "coarsedim/cover.hpp"
#include "coarsedim/growth.hpp"
#include "coarsedim/groupoid.hpp"
#include "coarsedim/partition.hpp"
#include "coarsedim/space.hpp"

namespace coarsedim {

// Space files: { "points": [ids], "dist": [[...]] }. Distances are JSON
// integers when integral and "p/q" strings otherwise.
std::string space_to_json(const FiniteMetricSpace& X);
FiniteMetricSpace space_from_json(const std::string& text);

// Cover files: { "families": [ [ [point ids...] ... ] ... ] }.
std::string cover_to_json(const TaggedCover& tc);
TaggedCover cover_from_json(const std::string& text);

// Groupoid files: explicit src/rng/inv tables, a composition triple list,
// and the length as a parallel array.
std::string groupoid_to_json(const FiniteGroupoid& G, const LengthFunction& len);
std::pair<FiniteGroupoid, LengthFunction> groupoid_from_json(
    const std::string& text);

// Witness files: { "mu": [[arrow, value]...], "provenance": ..., "report": ... }.
std::string witness_to_json(const AmenabilityWitness& w,
                            const AmenabilityReport* report = nullptr);
AmenabilityWitness witness_from_json(const std::string& text, int n_arrows);

std::string pou_to_json(const PartitionOfUnity& pou);

// Curve files: CSV with header R,value; infeasible rows encoded as inf.
std::string curve_to_csv(const DimensionCurve& c);
DimensionCurve curve_from_csv(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace coarsedim
