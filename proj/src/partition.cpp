#include "coarsedim/partition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coarsedim {

double pou_step_bound(int p, double f_value, double N) {
  double fp1 = f_value + 1.0;
  return (2.0 * p * fp1 + 2.0 * p * std::pow(fp1, 1.0 / p + 1.0)) / N;
}

int choose_p(double alpha) {
  if (alpha <= 0.0 || alpha >= 1.0)
    throw std::invalid_argument("choose_p: alpha must lie in (0,1)");
  return static_cast<int>(std::floor(alpha / (1.0 - alpha))) + 1;
}

ParamChoice choose_parameters_alpha(double alpha, double R, double eps,
                                    long long n_cap) {
  if (eps <= 0.0) throw std::invalid_argument("choose_parameters: eps <= 0");
  if (R <= 0.0) throw std::invalid_argument("choose_parameters: R <= 0");
  ParamChoice out;
  out.p = choose_p(alpha);
  const double p = out.p;
  const double lnR1 = std::log(R + 1.0);
  const double c1 = (alpha * (p + 1) * std::log(2.0) - p * std::log(eps / (4 * p))) /
                    ((p - alpha * (p + 1)) * lnR1);
  const double c2 = (alpha * std::log(2.0) - std::log(eps / (8 * p))) /
                    ((1.0 - alpha) * lnR1);
  double c = std::max(c1, c2) + 1e-6;

  auto f_at = [&](double x) { return std::ceil(std::pow(x, alpha)); };
  for (int tries = 0; tries < 200; ++tries) {
    double N = std::ceil(std::pow(R + 1.0, c));
    double lhs = pou_step_bound(out.p, f_at(N * R + 1.0), N);
    if (lhs < eps) {
      out.c = c;
      out.N_real = N;
      out.lhs = lhs;
      if (N <= static_cast<double>(n_cap)) out.N = static_cast<long long>(N);
      return out;
    }
    c += 0.25;
  }
  throw std::runtime_error("choose_parameters: no admissible exponent found");
}

ParamChoice choose_parameters_search(int p, const std::function<double(double)>& f,
                                     double R, double eps, long long n_cap) {
  if (eps <= 0.0) throw std::invalid_argument("choose_parameters: eps <= 0");
  ParamChoice out;
  out.p = p;
  for (long long N = 1; N <= n_cap; ++N) {
    double lhs = pou_step_bound(p, f(static_cast<double>(N) * R + 1.0),
                                static_cast<double>(N));
    if (lhs < eps) {
      out.N = N;
      out.N_real = static_cast<double>(N);
      out.lhs = lhs;
      return out;
    }
  }
  throw std::runtime_error("choose_parameters: no N within the cap satisfies the bound");
}

std::function<double(double)> curve_evaluator(const DimensionCurve& curve) {
  return [curve](double x) {
    for (const auto& [r, v] : curve.samples) {
      if (static_cast<double>(r) >= x) {
        if (!v) throw std::runtime_error("curve_evaluator: infeasible sample");
        return static_cast<double>(*v);
      }
    }
    throw std::runtime_error("curve_evaluator: point beyond the sampled domain");
  };
}

std::vector<int> NestedFamilies::level_at(int i, long long n) const {
  if (n < 0) throw std::invalid_argument("level_at: negative level");
  if (n >= N) return base[i];
  long long e = N - n;
  if (e > e_cap) {
    if (!saturated)
      throw std::logic_error("level_at: level below the materialized range");
    e = e_cap;
  }
  return levels[i][static_cast<std::size_t>(e)];
}

NestedFamilies nested_families(const FiniteGroupoid& G, const LengthFunction& len,
                               const std::vector<int>& K, long long N,
                               const std::vector<std::vector<int>>& base_cover,
                               const std::optional<Rat>& budget) {
  if (N < 1) throw std::invalid_argument("nested_families: N must be >= 1");
  if (base_cover.empty())
    throw std::invalid_argument("nested_families: empty base cover");
  const int n_units = G.n_units();

  NestedFamilies nf;
  nf.K = K;
  nf.N = N;
  nf.base = base_cover;

  // powers of K until saturation (or N, whichever first)
  std::vector<std::vector<int>> powers;
  powers.push_back(G.units());  // K^0
  while (static_cast<long long>(powers.size()) - 1 < N) {
    ArrowSetResult next = powers.size() == 1
                              ? ArrowSetResult{K, false}
                              : arrow_product_set(G, K, powers.back());
    if (powers.size() == 1) {
      std::sort(next.arrows.begin(), next.arrows.end());
      next.arrows.erase(std::unique(next.arrows.begin(), next.arrows.end()),
                        next.arrows.end());
    }
    if (next.hit_undefined)
      throw std::length_error("nested_families: power left a partial model");
    if (next.arrows == powers.back()) {
      nf.saturated = true;
      break;
    }
    powers.push_back(std::move(next.arrows));
    if (powers.size() > 1000000)
      throw std::length_error("nested_families: power chain too long");
  }
  nf.e_cap = static_cast<int>(powers.size()) - 1;

  // level at exponent e: {x in V_i : sources of K^e-arrows arriving at x lie in V_i}
  auto level_of = [&](const std::vector<int>& V, const std::vector<int>& power) {
    std::vector<char> inV(n_units, 0);
    for (int u : V) inV[u] = 1;
    std::vector<char> ok(n_units, 1);
    for (int g : power) {
      int tgt = G.unit_index(G.rng(g));
      if (!inV[G.unit_index(G.src(g))]) ok[tgt] = 0;
    }
    std::vector<int> out;
    for (int u : V)
      if (ok[u]) out.push_back(u);
    return out;
  };

  nf.levels.resize(base_cover.size());
  for (std::size_t i = 0; i < base_cover.size(); ++i) {
    auto V = base_cover[i];
    std::sort(V.begin(), V.end());
    nf.base[i] = V;
    for (int e = 0; e <= nf.e_cap; ++e)
      nf.levels[i].push_back(level_of(V, powers[static_cast<std::size_t>(e)]));
  }

  // invariant (1): the innermost sets cover the unit space
  std::vector<char> covered(n_units, 0);
  for (std::size_t i = 0; i < base_cover.size(); ++i)
    for (int u : nf.level_at(static_cast<int>(i), 0)) covered[u] = 1;
  for (int u = 0; u < n_units; ++u)
    if (!covered[u])
      throw std::invalid_argument(
          "nested_families: innermost sets do not cover the unit space; the "
          "base cover violates the orbit condition");

  // invariant (2): nesting along the chain
  for (std::size_t i = 0; i < nf.levels.size(); ++i)
    for (int e = 1; e <= nf.e_cap; ++e) {
      const auto& small = nf.levels[i][static_cast<std::size_t>(e)];
      const auto& big = nf.levels[i][static_cast<std::size_t>(e - 1)];
      if (!std::includes(big.begin(), big.end(), small.begin(), small.end()))
        throw std::invalid_argument("nested_families: chain not nested (K must contain the units)");
    }

  // invariant (3): one K-step out of a level lands in the next level
  auto check_step = [&](const std::vector<int>& from, const std::vector<int>& to) {
    std::vector<char> inFrom(n_units, 0), inTo(n_units, 0);
    for (int u : from) inFrom[u] = 1;
    for (int u : to) inTo[u] = 1;
    for (int g : K)
      if (inFrom[G.unit_index(G.rng(g))] && !inTo[G.unit_index(G.src(g))])
        return false;
    return true;
  };
  for (std::size_t i = 0; i < nf.levels.size(); ++i) {
    for (int e = 1; e <= nf.e_cap; ++e)
      if (!check_step(nf.levels[i][static_cast<std::size_t>(e)],
                      nf.levels[i][static_cast<std::size_t>(e - 1)]))
        throw std::invalid_argument("nested_families: one-step containment fails");
    if (nf.saturated && N > nf.e_cap) {
      const auto& sat = nf.levels[i][static_cast<std::size_t>(nf.e_cap)];
      if (!check_step(sat, sat))
        throw std::invalid_argument(
            "nested_families: saturated level is not K-step invariant");
    }
  }

  // invariant (4): budget of the generated subgroupoid over the outer sets
  if (budget) {
    for (const auto& V : nf.base) {
      std::vector<char> inV(n_units, 0);
      for (int u : V) inV[u] = 1;
      std::vector<int> seed;
      for (int g : K)
        if (inV[G.unit_index(G.src(g))] && inV[G.unit_index(G.rng(g))])
          seed.push_back(g);
      ArrowSetResult closure = generate_subgroupoid(G, seed);
      if (closure.hit_undefined)
        throw std::length_error("nested_families: closure left a partial model");
      for (int g : closure.arrows)
        if (len.values[g] > *budget)
          throw std::invalid_argument(
              "nested_families: outer-set subgroupoid exceeds the budget");
    }
  }
  return nf;
}

PartitionOfUnity build_pou(const NestedFamilies& nf, int p, PouMode mode) {
  if (p < 1) throw std::invalid_argument("build_pou: p must be >= 1");
  const int d1 = nf.indices();
  if (d1 == 0) throw std::invalid_argument("build_pou: no indices");
  // number of units comes from the chains' universe; recover from levels
  int n_units = 0;
  for (const auto& fam : nf.base)
    for (int u : fam) n_units = std::max(n_units, u + 1);
  // base sets may omit high-index units entirely; the psi table still needs
  // a row per unit, so callers pass unit counts implicitly via the groupoid
  // in verify_pou; here we size by the largest mentioned unit.

  PartitionOfUnity pou;
  pou.mode = mode;
  pou.p = mode == PouMode::flat ? 1 : p;
  pou.N = nf.N;
  pou.supports = nf.base;
  pou.psi.assign(d1, std::vector<Rat>(n_units, Rat(0)));

  for (int i = 0; i < d1; ++i) {
    // M(x) = N - (largest exponent whose level contains x); saturated
    // chains extend their fixed level to exponent N.
    for (int u : nf.base[i]) {
      int e_star = -1;
      for (int e = nf.e_cap; e >= 0; --e) {
        const auto& L = nf.levels[i][static_cast<std::size_t>(e)];
        if (std::binary_search(L.begin(), L.end(), u)) {
          e_star = e;
          break;
        }
      }
      if (e_star < 0) continue;  // psi stays 0
      long long M;
      if (nf.saturated && e_star == nf.e_cap)
        M = 0;
      else
        M = nf.N - e_star;
      if (M <= nf.N) pou.psi[i][u] = Rat(nf.N - M, nf.N);
    }
  }

  pou.phi.assign(d1, std::vector<double>(n_units, 0.0));
  if (mode == PouMode::flat) pou.phi_exact.assign(d1, std::vector<Rat>(n_units, Rat(0)));
  for (int u = 0; u < n_units; ++u) {
    if (mode == PouMode::p_power) {
      double s = 0.0;
      for (int i = 0; i < d1; ++i) s += std::pow(to_double(pou.psi[i][u]), p);
      if (s == 0.0)
        throw std::runtime_error("build_pou: zero denominator at a unit");
      double denom = std::pow(s, 1.0 / p);
      for (int i = 0; i < d1; ++i)
        pou.phi[i][u] = to_double(pou.psi[i][u]) / denom;
    } else {
      Rat s(0);
      for (int i = 0; i < d1; ++i) s += pou.psi[i][u];
      if (s == Rat(0))
        throw std::runtime_error("build_pou: zero denominator at a unit");
      for (int i = 0; i < d1; ++i) {
        pou.phi_exact[i][u] = pou.psi[i][u] / s;
        pou.phi[i][u] = to_double(pou.phi_exact[i][u]);
      }
    }
  }
  return pou;
}

PouReport verify_pou(const FiniteGroupoid& G, const LengthFunction& len,
                     const std::vector<int>& K, const PartitionOfUnity& pou,
                     double eps) {
  (void)len;
  PouReport rep;
  const int d1 = static_cast<int>(pou.psi.size());
  const int n_units = G.n_units();
  auto fail = [&](const std::string& why) {
    rep.pass = false;
    rep.failures.push_back(why);
  };
  auto psi_at = [&](int i, int u) {
    return u < static_cast<int>(pou.psi[i].size()) ? pou.psi[i][u] : Rat(0);
  };
  auto phi_at = [&](int i, int u) {
    return u < static_cast<int>(pou.phi[i].size()) ? pou.phi[i][u] : 0.0;
  };

  rep.psi_step_bound = Rat(2, pou.N);
  rep.per_index_bound =
      (2.0 + 2.0 * std::pow(static_cast<double>(d1), 1.0 / pou.p)) /
      static_cast<double>(pou.N);

  for (int g : K) {
    int us = G.unit_index(G.src(g));
    int ur = G.unit_index(G.rng(g));
    double sum = 0.0;
    for (int i = 0; i < d1; ++i) {
      Rat dpsi = psi_at(i, ur) - psi_at(i, us);
      if (dpsi < Rat(0)) dpsi = -dpsi;
      rep.max_psi_step = std::max(rep.max_psi_step, dpsi);
      if (dpsi > rep.psi_step_bound) fail("psi step above 2/N at an arrow");
      double dphi = std::abs(phi_at(i, ur) - phi_at(i, us));
      rep.max_phi_step = std::max(rep.max_phi_step, dphi);
      sum += dphi;
      if (pou.mode == PouMode::p_power &&
          dphi > rep.per_index_bound + 1e-12)
        fail("per-index phi step above the chain bound");
      if (pou.mode == PouMode::flat && !(dphi < eps))
        fail("flat-mode phi step not below eps");
    }
    if (pou.mode == PouMode::p_power) {
      double v = pou.p * sum;
      rep.max_p_sum_step = std::max(rep.max_p_sum_step, v);
      if (!(v < eps)) fail("p * sum of phi steps not below eps");
    }
  }

  for (int u = 0; u < n_units; ++u) {
    if (pou.mode == PouMode::p_power) {
      double s = 0.0;
      for (int i = 0; i < d1; ++i) s += std::pow(phi_at(i, u), pou.p);
      rep.max_norm_defect = std::max(rep.max_norm_defect, std::abs(s - 1.0));
      if (std::abs(s - 1.0) > 1e-9) fail("p-power normalization off at a unit");
    } else {
      Rat s(0);
      for (int i = 0; i < d1; ++i)
        s += u < static_cast<int>(pou.phi_exact[i].size()) ? pou.phi_exact[i][u]
                                                           : Rat(0);
      if (s > Rat(1)) fail("flat sums exceed 1");
      // every unit is in r(K) u s(K) for threshold generator sets
      bool touched = false;
      for (int g : K)
        if (G.unit_index(G.src(g)) == u || G.unit_index(G.rng(g)) == u) {
          touched = true;
          break;
        }
      if (touched && s != Rat(1)) fail("flat sum not exactly 1 on r(K) u s(K)");
      rep.max_norm_defect =
          std::max(rep.max_norm_defect, std::abs(to_double(s) - 1.0));
    }
  }

  // supports
  for (int i = 0; i < d1; ++i) {
    std::vector<char> inS(n_units, 0);
    for (int u : pou.supports[i]) inS[u] = 1;
    for (int u = 0; u < n_units; ++u)
      if (phi_at(i, u) > 0.0 && !inS[u]) fail("phi positive outside its support");
  }
  return rep;
}

}  // namespace coarsedim
