#include "coarsedim/amenability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coarsedim {

std::string provenance_name(WitnessProvenance p) {
  switch (p) {
    case WitnessProvenance::exact_fiber: return "exact-fiber";
    case WitnessProvenance::assembled_flat: return "assembled-flat";
    case WitnessProvenance::assembled_p_power: return "assembled-p-power";
    case WitnessProvenance::user: return "user";
  }
  return "user";
}

AmenabilityReport check_amenability(const FiniteGroupoid& G,
                                    const AmenabilityWitness& w,
                                    const std::vector<int>& K, double eps) {
  if (static_cast<int>(w.mu.size()) != G.size())
    throw std::invalid_argument("check_amenability: witness size mismatch");
  for (double v : w.mu)
    if (v < 0.0 || v > 1.0 + 1e-12)
      throw std::invalid_argument("check_amenability: mu out of [0,1]");
  const bool exact = w.mu_exact.has_value();
  if (exact && static_cast<int>(w.mu_exact->size()) != G.size())
    throw std::invalid_argument("check_amenability: exact witness size mismatch");

  AmenabilityReport rep;
  rep.exact_mode = exact;
  auto fail = [&](const std::string& why) {
    rep.pass = false;
    rep.failures.push_back(why);
  };

  // (1) fiber sums at most 1, over every unit
  for (int u : G.units()) {
    double s = 0.0;
    Rat se(0);
    for (int g : G.arrows_with_src(u)) {
      s += w.mu[g];
      if (exact) se += (*w.mu_exact)[g];
    }
    if (exact) {
      if (se > Rat(1)) fail("fiber sum above 1");
      rep.max_fiber_excess =
          std::max(rep.max_fiber_excess, std::max(0.0, to_double(se) - 1.0));
    } else {
      if (s > 1.0 + 1e-9) fail("fiber sum above 1");
      rep.max_fiber_excess = std::max(rep.max_fiber_excess, std::max(0.0, s - 1.0));
    }
  }

  if (exact) rep.exact_unit_defect = Rat(0);
  if (exact) rep.exact_invariance_defect = Rat(0);

  // (2) near-full fibers and (3) near-invariance, over K
  for (int k : K) {
    int rk = G.rng(k);
    double s2 = 0.0, s3 = 0.0;
    Rat e2(0), e3(0);
    for (int g : G.arrows_with_src(rk)) {
      int gk = G.compose(g, k);
      double mu_gk = gk < 0 ? 0.0 : w.mu[gk];
      s2 += w.mu[g];
      s3 += std::abs(w.mu[g] - mu_gk);
      if (exact) {
        Rat egk = gk < 0 ? Rat(0) : (*w.mu_exact)[gk];
        e2 += (*w.mu_exact)[g];
        Rat d = (*w.mu_exact)[g] - egk;
        if (d < Rat(0)) d = -d;
        e3 += d;
      }
    }
    double d2 = std::abs(1.0 - s2);
    rep.max_unit_defect = std::max(rep.max_unit_defect, d2);
    rep.max_invariance_defect = std::max(rep.max_invariance_defect, s3);
    if (!(d2 < eps)) fail("fiber sum at r(k) not within eps of 1");
    if (!(s3 < eps)) fail("translation defect at k not below eps");
    if (exact) {
      Rat de2 = Rat(1) - e2;
      if (de2 < Rat(0)) de2 = -de2;
      rep.exact_unit_defect = std::max(*rep.exact_unit_defect, de2);
      rep.exact_invariance_defect = std::max(*rep.exact_invariance_defect, e3);
    }
  }
  return rep;
}

AmenabilityWitness exact_witness_on(const FiniteGroupoid& G,
                                    const std::vector<int>& sub_arrows) {
  std::vector<long long> fiber_count(G.size(), 0);
  std::vector<char> in(G.size(), 0);
  for (int g : sub_arrows) {
    if (g < 0 || g >= G.size())
      throw std::invalid_argument("exact_witness_on: arrow out of range");
    in[g] = 1;
  }
  for (int g : sub_arrows) ++fiber_count[G.src(g)];

  AmenabilityWitness w;
  w.provenance = WitnessProvenance::exact_fiber;
  w.mu.assign(G.size(), 0.0);
  w.mu_exact = std::vector<Rat>(G.size(), Rat(0));
  for (int g = 0; g < G.size(); ++g) {
    if (!in[g]) continue;
    (*w.mu_exact)[g] = Rat(1, fiber_count[G.src(g)]);
    w.mu[g] = to_double((*w.mu_exact)[g]);
    w.support.push_back(g);
  }
  return w;
}

AmenabilityWitness exact_witness(const FiniteGroupoid& H) {
  std::vector<int> all(H.size());
  for (int g = 0; g < H.size(); ++g) all[g] = g;
  return exact_witness_on(H, all);
}

AmenabilityWitness assemble_witness(const FiniteGroupoid& G,
                                    const std::vector<int>& K,
                                    const std::vector<std::vector<int>>& cover,
                                    const PartitionOfUnity& pou,
                                    const std::vector<AmenabilityWitness>& mu_i,
                                    PouMode mode) {
  if (mode != pou.mode)
    throw std::invalid_argument("assemble_witness: mode does not match the pou");
  const int d1 = static_cast<int>(cover.size());
  if (static_cast<int>(mu_i.size()) != d1 ||
      static_cast<int>(pou.psi.size()) != d1)
    throw std::invalid_argument("assemble_witness: index counts disagree");

  // each mu_i must live inside the subgroupoid generated by K over cover[i]
  for (int i = 0; i < d1; ++i) {
    std::vector<char> inU(G.n_units(), 0);
    for (int u : cover[i]) inU[u] = 1;
    std::vector<int> seed;
    for (int g : K)
      if (inU[G.unit_index(G.src(g))] && inU[G.unit_index(G.rng(g))])
        seed.push_back(g);
    ArrowSetResult closure = generate_subgroupoid(G, seed);
    std::vector<char> inH(G.size(), 0);
    for (int g : closure.arrows) inH[g] = 1;
    for (int g : mu_i[i].support)
      if (!inH[g])
        throw std::invalid_argument(
            "assemble_witness: mu_i supported outside its subgroupoid");
  }

  const bool exact = mode == PouMode::flat &&
                     std::all_of(mu_i.begin(), mu_i.end(), [](const auto& w) {
                       return w.mu_exact.has_value();
                     });

  AmenabilityWitness w;
  w.provenance = mode == PouMode::flat ? WitnessProvenance::assembled_flat
                                       : WitnessProvenance::assembled_p_power;
  w.mu.assign(G.size(), 0.0);
  if (exact) w.mu_exact = std::vector<Rat>(G.size(), Rat(0));
  auto phi_at = [&](int i, int u) {
    return u < static_cast<int>(pou.phi[i].size()) ? pou.phi[i][u] : 0.0;
  };
  for (int g = 0; g < G.size(); ++g) {
    int u = G.unit_index(G.src(g));
    double v = 0.0;
    Rat ve(0);
    for (int i = 0; i < d1; ++i) {
      if (mu_i[i].mu[g] == 0.0) continue;
      double weight = mode == PouMode::flat
                          ? phi_at(i, u)
                          : std::pow(phi_at(i, u), pou.p);
      v += weight * mu_i[i].mu[g];
      if (exact) {
        Rat we = u < static_cast<int>(pou.phi_exact[i].size())
                     ? pou.phi_exact[i][u]
                     : Rat(0);
        ve += we * (*mu_i[i].mu_exact)[g];
      }
    }
    w.mu[g] = std::min(1.0, v);
    if (exact) (*w.mu_exact)[g] = ve;
    if (v > 0.0) w.support.push_back(g);
  }
  return w;
}

PipelineResult amenability_pipeline(const FiniteGroupoid& G,
                                    const LengthFunction& len,
                                    const PipelineOptions& opts) {
  PipelineResult res;
  const bool p_power = opts.alpha.has_value();
  std::vector<int> K = arrows_below_length(G, len, opts.R);

  try {
    long long N = 0;
    int p = 1;
    int d_for_flat = 0;
    if (p_power) {
      res.params =
          choose_parameters_alpha(*opts.alpha, to_double(opts.R), opts.eps,
                                  opts.n_cap);
      if (!res.params.N) {
        res.failed_stage = "choose_parameters: N exceeds the working cap";
        return res;
      }
      N = *res.params.N;
      p = res.params.p;
    } else {
      // flat mode: N and the base dimension d depend on each other; iterate
      // to a fixed point (d is tiny at this scale, so this settles fast).
      int d_guess = 0;
      for (int iter = 0; iter < 8; ++iter) {
        double need = (2.0 * d_guess + 4.0) * (d_guess + 2.0) / opts.eps;
        N = static_cast<long long>(std::floor(need)) + 1;
        if (N > opts.n_cap) {
          res.failed_stage = "choose_parameters: N exceeds the working cap";
          return res;
        }
        ArrowSetResult enl = arrow_power(G, K, N + 1);
        if (enl.hit_undefined) {
          res.failed_stage = "enlarged generators: left a partial model";
          return res;
        }
        DadQuery q{enl.arrows, opts.budget, opts.m_max, true};
        DadResult base = dad_groupoid(G, len, q);
        if (!base.value) {
          res.failed_stage = "base cover: infeasible within m_max";
          return res;
        }
        res.base = base;
        if (*base.value == d_guess) break;
        d_guess = *base.value;
      }
      d_for_flat = res.base.value.value_or(0);
      res.params.p = 1;
      res.params.N = N;
      res.params.N_real = static_cast<double>(N);
    }
    res.N = N;

    if (p_power) {
      ArrowSetResult enl = arrow_power(G, K, N + 1);
      if (enl.hit_undefined) {
        res.failed_stage = "enlarged generators: left a partial model";
        return res;
      }
      DadQuery q{enl.arrows, opts.budget, opts.m_max, true};
      res.base = dad_groupoid(G, len, q);
      if (!res.base.value) {
        res.failed_stage = "base cover: infeasible within m_max";
        return res;
      }
    }
    res.cover = res.base.cover;

    NestedFamilies nf =
        nested_families(G, len, K, N, res.cover, opts.budget);
    res.pou = build_pou(nf, p, p_power ? PouMode::p_power : PouMode::flat);
    double pou_eps =
        p_power ? opts.eps : opts.eps / (d_for_flat + 2.0);
    res.pou_report = verify_pou(G, len, K, res.pou, pou_eps);

    std::vector<AmenabilityWitness> mu_i;
    for (const auto& U : res.cover) {
      std::vector<char> inU(G.n_units(), 0);
      for (int u : U) inU[u] = 1;
      std::vector<int> seed;
      for (int g : K)
        if (inU[G.unit_index(G.src(g))] && inU[G.unit_index(G.rng(g))])
          seed.push_back(g);
      mu_i.push_back(exact_witness_on(G, generate_subgroupoid(G, seed).arrows));
    }
    res.witness = assemble_witness(G, K, res.cover, res.pou, mu_i,
                                   p_power ? PouMode::p_power : PouMode::flat);
    res.final_report = check_amenability(G, res.witness, K, opts.eps);
    res.pass = res.pou_report.pass && res.final_report.pass;
  } catch (const std::exception& e) {
    res.failed_stage = std::string("exception: ") + e.what();
    res.pass = false;
  }
  return res;
}

}  // namespace coarsedim
