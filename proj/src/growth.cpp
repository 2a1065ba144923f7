#include "coarsedim/growth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace coarsedim {

bool DimensionCurve::monotone() const {
  std::optional<int> prev;
  for (const auto& [r, v] : samples) {
    if (!v) continue;
    if (prev && *v < *prev) return false;
    prev = v;
  }
  return true;
}

int DimensionCurve::finite_count() const {
  int c = 0;
  for (const auto& [r, v] : samples)
    if (v) ++c;
  return c;
}

std::optional<PreceqWitness> preceq_witness(const DimensionCurve& f,
                                            const DimensionCurve& g,
                                            int k_max) {
  if (k_max < 1) throw std::invalid_argument("preceq_witness: k_max < 1");
  bool any_window = false;
  for (int k = 1; k <= k_max; ++k) {
    long long lo = 0, hi = 0;
    bool empty = true, ok = true;
    for (const auto& [x, fv] : f.samples) {
      if (x <= k) continue;
      long long gx = static_cast<long long>(k) * x + k;
      if (!g.contains(gx)) continue;
      if (empty) lo = x;
      hi = x;
      empty = false;
      if (!fv) {  // f infeasible = +infinity: cannot be dominated
        ok = false;
        continue;
      }
      auto gv = g.at(gx);
      if (!gv) continue;  // g infeasible dominates everything
      if (static_cast<long long>(*fv) >
          static_cast<long long>(k) * (*gv) + k)
        ok = false;
    }
    if (empty) continue;
    any_window = true;
    if (ok) return PreceqWitness{k, lo, hi};
  }
  if (!any_window)
    throw std::invalid_argument("preceq_witness: empty effective window");
  return std::nullopt;
}

EquivResult equiv(const DimensionCurve& f, const DimensionCurve& g, int k_max) {
  EquivResult res;
  res.fg = preceq_witness(f, g, k_max);
  res.gf = preceq_witness(g, f, k_max);
  if (res.fg && res.gf)
    res.kind = EquivKind::equivalent;
  else if (res.fg)
    res.kind = EquivKind::only_fg;
  else if (res.gf)
    res.kind = EquivKind::only_gf;
  else
    res.kind = EquivKind::incomparable;
  return res;
}

namespace {

struct Fit {
  double intercept = 0.0, slope = 0.0, rms = 0.0;
};

Fit linreg(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  Fit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double e = ys[i] - (f.intercept + f.slope * xs[i]);
    ss += e * e;
  }
  f.rms = std::sqrt(ss / n);
  return f;
}

}  // namespace

ClassifyResult classify(const DimensionCurve& f, double ambiguity) {
  std::vector<long long> rs;
  std::vector<int> vs;
  for (const auto& [r, v] : f.samples)
    if (v) {
      rs.push_back(r);
      vs.push_back(*v);
    }
  if (rs.size() < 5)
    throw std::invalid_argument("classify: need at least 5 finite samples");

  ClassifyResult res;
  if (std::all_of(vs.begin(), vs.end(), [&](int v) { return v == vs[0]; })) {
    res.kind = GrowthClass::constant;
    res.estimate = vs[0];
    return res;
  }

  const int shift = *std::min_element(vs.begin(), vs.end()) == 0 ? 1 : 0;
  std::vector<double> y, lnR, R;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    y.push_back(std::log(static_cast<double>(vs[i] + shift)));
    lnR.push_back(std::log(static_cast<double>(rs[i])));
    R.push_back(static_cast<double>(rs[i]));
  }

  double mean = 0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss = 0;
  for (double v : y) ss += (v - mean) * (v - mean);
  res.residual_constant = std::sqrt(ss / static_cast<double>(y.size()));

  Fit poly = linreg(lnR, y);
  Fit expo = linreg(R, y);
  res.residual_polynomial = poly.rms;
  res.residual_exponential = expo.rms;

  struct Entry {
    GrowthClass kind;
    double rms;
    double est;
  };
  std::vector<Entry> entries = {
      {GrowthClass::constant, res.residual_constant, std::exp(mean) - shift},
      {GrowthClass::polynomial, poly.rms, poly.slope},
      {GrowthClass::exponential, expo.rms, expo.slope}};
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.rms < b.rms; });
  if (entries[0].rms > (1.0 - ambiguity) * entries[1].rms) {
    res.kind = GrowthClass::inconclusive;
    return res;
  }
  res.kind = entries[0].kind;
  res.estimate = entries[0].est;
  return res;
}

}  // namespace coarsedim
