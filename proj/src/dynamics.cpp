#include "coarsedim/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace coarsedim {

namespace {

using Mask = std::uint32_t;

std::vector<int> mask_to_points(Mask m) {
  std::vector<int> out;
  while (m) {
    out.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return out;
}

std::vector<Mask> maximal_of(std::vector<Mask> sets) {
  std::sort(sets.begin(), sets.end(), [](Mask a, Mask b) {
    return std::popcount(a) > std::popcount(b);
  });
  std::vector<Mask> out;
  for (Mask s : sets) {
    bool dominated = false;
    for (Mask t : out)
      if ((s & ~t) == 0) {
        dominated = true;
        break;
      }
    if (!dominated) out.push_back(s);
  }
  return out;
}

/// Minimum number of candidate sets so that every item mask fits inside a
/// chosen one; branch on the first unfit item.
std::optional<std::vector<Mask>> min_cover(const std::vector<Mask>& candidates,
                                           const std::vector<Mask>& items,
                                           int max_sets) {
  std::vector<Mask> chosen;
  std::function<bool(int)> rec = [&](int depth_left) {
    Mask pending = 0;
    bool any = false;
    for (Mask it : items) {
      bool fit = false;
      for (Mask c : chosen)
        if ((it & ~c) == 0) {
          fit = true;
          break;
        }
      if (!fit) {
        pending = it;
        any = true;
        break;
      }
    }
    if (!any) return true;
    if (depth_left == 0) return false;
    for (Mask c : candidates) {
      if ((pending & ~c) != 0) continue;
      chosen.push_back(c);
      if (rec(depth_left - 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  for (int t = 1; t <= max_sets; ++t) {
    chosen.clear();
    if (rec(t)) return chosen;
  }
  return std::nullopt;
}

/// Exact solver shared by the action and groupoid sides: the admissible
/// subsets form a downward-closed family, so a minimum cover uses maximal
/// admissible sets only.
DadResult exact_dad(int n, const std::function<bool(const std::vector<int>&)>& good,
                    const std::vector<std::vector<int>>& extra_items, int m_max) {
  DadResult res;
  std::vector<Mask> good_masks;
  for (Mask s = 1; s < (Mask(1) << n); ++s) {
    if (good(mask_to_points(s))) good_masks.push_back(s);
  }
  std::vector<Mask> items;
  for (int p = 0; p < n; ++p) items.push_back(Mask(1) << p);
  for (const auto& it : extra_items) {
    Mask m = 0;
    for (int p : it) m |= Mask(1) << p;
    if (m) items.push_back(m);
  }
  auto cover = min_cover(maximal_of(good_masks), items, m_max + 1);
  if (!cover) return res;
  res.value = static_cast<int>(cover->size()) - 1;
  for (Mask m : *cover) res.cover.push_back(mask_to_points(m));
  return res;
}

DadResult greedy_dad(int n, const std::function<bool(const std::vector<int>&)>& good,
                     const std::vector<std::vector<int>>& extra_items, int m_max) {
  DadResult res;
  res.exact = false;
  std::vector<std::vector<int>> items;
  for (int p = 0; p < n; ++p) items.push_back({p});
  for (const auto& it : extra_items)
    if (!it.empty()) items.push_back(it);

  std::vector<std::vector<int>> cover;
  auto fits = [&](const std::vector<int>& it) {
    for (const auto& s : cover)
      if (std::includes(s.begin(), s.end(), it.begin(), it.end())) return true;
    return false;
  };
  for (std::size_t round = 0; round <= items.size(); ++round) {
    std::vector<int> pending;
    for (const auto& it : items)
      if (!fits(it)) {
        pending = it;
        break;
      }
    if (pending.empty()) {
      res.value = static_cast<int>(cover.size()) - 1;
      res.cover = cover;
      if (*res.value > m_max) res.value = std::nullopt;
      return res;
    }
    std::vector<int> s = pending;
    if (!good(s)) return res;  // even the bare item violates the budget
    for (int p = 0; p < n; ++p) {
      if (std::binary_search(s.begin(), s.end(), p)) continue;
      std::vector<int> t = s;
      t.insert(std::lower_bound(t.begin(), t.end(), p), p);
      if (good(t)) s = std::move(t);
    }
    cover.push_back(std::move(s));
  }
  return res;
}

}  // namespace

StayInResult stay_in_set(const GroupAction& action, const std::vector<int>& U,
                         const std::vector<int>& E) {
  const Group& g = action.group;
  std::vector<char> inE(g.size(), 0);
  for (int e : E) {
    if (e < 0 || e >= g.size())
      throw std::invalid_argument("stay_in_set: element out of range");
    inE[e] = 1;
  }
  if (!inE[g.identity])
    throw std::invalid_argument("stay_in_set: E must contain the identity");
  for (int e : E)
    if (!inE[g.inv[e]])
      throw std::invalid_argument("stay_in_set: E must be symmetric");

  const int n = action.n_points();
  std::vector<char> inU(n, 0);
  for (int x : U) {
    if (x < 0 || x >= n) throw std::invalid_argument("stay_in_set: point out of range");
    inU[x] = 1;
  }

  StayInResult res;
  std::vector<char> seen(static_cast<std::size_t>(n) * g.size(), 0);
  std::vector<std::pair<int, int>> queue;  // (point, accumulated element)
  auto visit = [&](int x, int acc) {
    std::size_t key = static_cast<std::size_t>(x) * g.size() + acc;
    if (!seen[key]) {
      seen[key] = 1;
      queue.emplace_back(x, acc);
    }
  };
  for (int x : U) visit(x, g.identity);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto [x, acc] = queue[head];
    for (int e : E) {
      int x2 = action.apply(e, x);
      if (!inU[x2]) continue;
      int acc2 = g.product(e, acc);
      if (acc2 < 0) {
        res.budget_exceeded = true;
        continue;
      }
      visit(x2, acc2);
    }
  }
  std::vector<char> got(g.size(), 0);
  for (auto [x, acc] : queue) got[acc] = 1;
  for (int a = 0; a < g.size(); ++a)
    if (got[a]) res.elements.push_back(a);
  return res;
}

DadResult dad_action(const GroupAction& action, const std::vector<int>& E,
                     const std::optional<Rat>& B, int m_max, int exact_cap) {
  const int n = action.n_points();
  auto good = [&](const std::vector<int>& U) {
    StayInResult st = stay_in_set(action, U, E);
    if (st.budget_exceeded) return false;
    if (!B) return true;
    for (int gamma : st.elements)
      if (action.group.length[gamma] > *B) return false;
    return true;
  };
  if (n <= exact_cap && n <= 25) return exact_dad(n, good, {}, m_max);
  return greedy_dad(n, good, {}, m_max);
}

DadResult dad_groupoid(const FiniteGroupoid& G, const LengthFunction& len,
                       const DadQuery& q, int exact_cap) {
  const int n = G.n_units();
  std::vector<char> in_units(G.size(), 0);
  for (int u = 0; u < n; ++u) in_units[G.units()[u]] = 1;

  auto good = [&](const std::vector<int>& U) {
    std::vector<char> inU(n, 0);
    for (int u : U) inU[u] = 1;
    std::vector<int> seed;
    for (int g : q.generators)
      if (inU[G.unit_index(G.src(g))] && inU[G.unit_index(G.rng(g))])
        seed.push_back(g);
    ArrowSetResult closure = generate_subgroupoid(G, seed);
    if (closure.hit_undefined) return false;  // left a partial model
    if (!q.budget) return true;
    for (int g : closure.arrows)
      if (len.values[g] > *q.budget) return false;
    return true;
  };

  std::vector<std::vector<int>> orbit_items;
  if (q.orbit_condition) {
    for (int u = 0; u < n; ++u) {
      std::vector<int> orbit;
      for (int g : q.generators)
        if (G.rng(g) == G.units()[u]) orbit.push_back(G.unit_index(G.src(g)));
      std::sort(orbit.begin(), orbit.end());
      orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
      if (!orbit.empty()) orbit_items.push_back(std::move(orbit));
    }
  }

  if (n <= exact_cap && n <= 25) return exact_dad(n, good, orbit_items, q.m_max);
  return greedy_dad(n, good, orbit_items, q.m_max);
}

CrosscheckReport crosscheck_lemma412(const GroupAction& action, const Rat& R,
                                     const std::optional<Rat>& B, int m_max) {
  CrosscheckReport rep;
  std::vector<int> E;
  for (int g = 0; g < action.group.size(); ++g)
    if (action.group.length[g] < R) E.push_back(g);
  rep.action_side = dad_action(action, E, B, m_max);

  auto [G, len] = build_transformation_groupoid(action);
  DadQuery q;
  q.generators = arrows_below_length(G, len, R);
  q.budget = B;
  q.m_max = m_max;
  rep.groupoid_side = dad_groupoid(G, len, q);

  rep.values = {rep.action_side.value, rep.groupoid_side.value};
  rep.ok = rep.action_side.value == rep.groupoid_side.value;
  rep.detail = rep.ok ? "action and groupoid sides agree"
                      : "action and groupoid sides disagree";
  return rep;
}

CrosscheckReport crosscheck_thm416(const FiniteMetricSpace& X, const Rat& R,
                                   const Rat& D, int m_max) {
  CrosscheckReport rep;
  auto [P, len] = build_pair_groupoid(X);
  const int n = X.size();

  DadQuery q;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (X.dist(x, y) <= R) q.generators.push_back(pair_arrow(X, x, y));
  q.budget = D;
  q.m_max = m_max;
  rep.groupoid_side = dad_groupoid(P, len, q);

  Entourage ER = Entourage::tube(X, R);
  Entourage ED = Entourage::tube(X, D);
  rep.coarse_side = solve_coarse(X, ER, ED, m_max);
  rep.families_side = solve_families(X, {R, D, m_max});

  rep.values = {rep.groupoid_side.value, rep.coarse_side.value,
                rep.families_side.value};
  bool equal = rep.groupoid_side.value == rep.coarse_side.value &&
               rep.coarse_side.value == rep.families_side.value;
  if (!equal) {
    rep.detail = "solver values disagree";
    return rep;
  }
  if (!rep.groupoid_side.value) {
    rep.ok = true;
    rep.detail = "all three sides infeasible";
    return rep;
  }

  // dad witness -> R-disjoint families via the orbit equivalence classes
  TaggedCover from_dad;
  for (const auto& U : rep.groupoid_side.cover) {
    std::vector<int> seed;
    std::vector<char> inU(n, 0);
    for (int u : U) inU[u] = 1;
    for (int g : q.generators)
      if (inU[P.unit_index(P.src(g))] && inU[P.unit_index(P.rng(g))])
        seed.push_back(g);
    ArrowSetResult closure = generate_subgroupoid(P, seed);
    // connected classes of U under the closure arrows
    std::vector<int> cls(n, -1);
    int nc = 0;
    for (int u : U)
      if (cls[u] < 0) {
        cls[u] = nc++;
        std::vector<int> stack = {u};
        while (!stack.empty()) {
          int v = stack.back();
          stack.pop_back();
          for (int g : closure.arrows) {
            if (P.is_unit(g)) continue;
            int a = P.unit_index(P.rng(g)), b = P.unit_index(P.src(g));
            if (a == v && inU[b] && cls[b] < 0) {
              cls[b] = cls[u];
              stack.push_back(b);
            }
            if (b == v && inU[a] && cls[a] < 0) {
              cls[a] = cls[u];
              stack.push_back(a);
            }
          }
        }
      }
    std::vector<PointSet> fam(nc);
    for (int u : U) fam[cls[u]].push_back(u);
    for (auto& s : fam) std::sort(s.begin(), s.end());
    from_dad.families.push_back(std::move(fam));
  }
  CoverCheck c1 = check_tagged_cover(X, from_dad, R, D);
  if (!c1.ok) {
    rep.detail = "dad witness classes are not a valid family witness: " + c1.issue;
    return rep;
  }

  // families witness -> cover by family unions, re-checked on the dad side
  for (const auto& fam : rep.families_side.tagged.families) {
    std::vector<int> U;
    for (const auto& s : fam) U.insert(U.end(), s.begin(), s.end());
    std::sort(U.begin(), U.end());
    std::vector<char> inU(n, 0);
    for (int u : U) inU[u] = 1;
    std::vector<int> seed;
    for (int g : q.generators)
      if (inU[P.unit_index(P.src(g))] && inU[P.unit_index(P.rng(g))])
        seed.push_back(g);
    ArrowSetResult closure = generate_subgroupoid(P, seed);
    for (int g : closure.arrows)
      if (len.values[g] > D) {
        rep.detail = "family-union cover violates the dad budget";
        return rep;
      }
  }

  rep.ok = true;
  rep.detail = "dad = coarse = families, with both witness translations valid";
  return rep;
}

void ProbMeasure::validate() const {
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("prob measure: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("prob measure: weights do not sum to 1");
}

double equivariance_defect(const GroupAction& on_points,
                           const GroupAction& on_vertices,
                           const std::vector<ProbMeasure>& f,
                           const std::vector<int>& E) {
  if (on_points.group.size() != on_vertices.group.size())
    throw std::invalid_argument("equivariance_defect: actions of different groups");
  const int n = on_points.n_points();
  const int nv = on_vertices.n_points();
  if (static_cast<int>(f.size()) != n)
    throw std::invalid_argument("equivariance_defect: need one measure per point");
  for (const auto& mu : f) {
    if (static_cast<int>(mu.weights.size()) != nv)
      throw std::invalid_argument("equivariance_defect: measure size mismatch");
    mu.validate();
  }
  double defect = 0.0;
  for (int g : E) {
    int ginv = on_points.group.inv[g];
    for (int x = 0; x < n; ++x) {
      const auto& lhs = f[on_points.apply(g, x)].weights;
      double l1 = 0.0;
      for (int v = 0; v < nv; ++v)
        l1 += std::abs(lhs[v] - f[x].weights[on_vertices.apply(ginv, v)]);
      defect = std::max(defect, l1);
    }
  }
  return defect;
}

}  // namespace coarsedim
