#include "coarsedim/cover.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>

namespace coarsedim {

namespace {

using Mask = std::uint32_t;

int lowest_bit(Mask m) { return std::countr_zero(m); }

std::vector<int> mask_to_points(Mask m) {
  std::vector<int> out;
  while (m) {
    int b = lowest_bit(m);
    out.push_back(b);
    m &= m - 1;
  }
  return out;
}

Mask points_to_mask(const PointSet& s) {
  Mask m = 0;
  for (int p : s) m |= Mask(1) << p;
  return m;
}

/// Per-point masks of partners within a distance threshold (closed).
std::vector<Mask> within_masks(const FiniteMetricSpace& X, const Rat& r) {
  const int n = X.size();
  std::vector<Mask> w(n, 0);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if (X.dist(p, q) <= r) w[p] |= Mask(1) << q;
  return w;
}

bool clique_in(const std::vector<Mask>& within, Mask s) {
  for (Mask m = s; m;) {
    int p = lowest_bit(m);
    m &= m - 1;
    if ((s & ~within[p]) != 0) return false;
  }
  return true;
}

/// All non-empty subsets whose pairwise distances stay within `within`
/// (i.e. cliques of the threshold graph). Enumerated once per minimum
/// element. Throws when a ball is too large to enumerate.
std::vector<Mask> threshold_cliques(const FiniteMetricSpace& X,
                                    const std::vector<Mask>& within) {
  const int n = X.size();
  std::vector<Mask> out;
  for (int x = 0; x < n; ++x) {
    Mask allowed = within[x] & ~((Mask(1) << x) | ((Mask(1) << x) - 1));
    if (std::popcount(allowed) > 22)
      throw std::length_error("cover solver: subset enumeration too large");
    Mask self = Mask(1) << x;
    Mask sub = allowed;
    while (true) {
      Mask s = sub | self;
      if (clique_in(within, s)) out.push_back(s);
      if (sub == 0) break;
      sub = (sub - 1) & allowed;
    }
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

void require_exact_size(const FiniteMetricSpace& X, const SolveOptions& opts) {
  if (X.size() > opts.max_points)
    throw std::length_error("cover solver: space exceeds exact-search cap");
  if (X.size() > 31)
    throw std::length_error("cover solver: more than 31 points");
}

/// Branch-and-bound: fit every `item` inside some chosen candidate set,
/// subject to a per-state predicate supplied by the caller through
/// `try_add` / `undo`. Returns true and fills `chosen` on success.
struct FitSearch {
  const std::vector<Mask>& items;
  const std::vector<Mask>& candidates;
  std::vector<Mask> chosen;
  std::set<std::vector<Mask>> visited;

  bool (*can_add)(void*, Mask) = nullptr;
  void (*apply)(void*, Mask) = nullptr;
  void (*revert)(void*, Mask) = nullptr;
  void* ctx = nullptr;

  bool run() { return rec(); }

  bool rec() {
    Mask pending = 0;
    for (Mask it : items) {
      bool fit = false;
      for (Mask c : chosen)
        if ((it & ~c) == 0) {
          fit = true;
          break;
        }
      if (!fit) {
        pending = it;
        break;
      }
    }
    if (pending == 0) return true;

    std::vector<Mask> key = chosen;
    std::sort(key.begin(), key.end());
    if (!visited.insert(key).second) return false;

    for (Mask c : candidates) {
      if ((pending & ~c) != 0) continue;
      if (!can_add(ctx, c)) continue;
      apply(ctx, c);
      chosen.push_back(c);
      if (rec()) return true;
      chosen.pop_back();
      revert(ctx, c);
    }
    return false;
  }
};

}  // namespace

std::vector<PointSet> TaggedCover::flat() const {
  std::vector<PointSet> out;
  for (const auto& fam : families)
    for (const auto& s : fam) out.push_back(s);
  return out;
}

std::vector<int> TaggedCover::covered_points(int space_size) const {
  std::vector<bool> seen(space_size, false);
  for (const auto& fam : families)
    for (const auto& s : fam)
      for (int p : s)
        if (p >= 0 && p < space_size) seen[p] = true;
  std::vector<int> out;
  for (int p = 0; p < space_size; ++p)
    if (seen[p]) out.push_back(p);
  return out;
}

CoverCheck check_tagged_cover(const FiniteMetricSpace& X, const TaggedCover& tc,
                              const Rat& R, const std::optional<Rat>& D,
                              const std::vector<int>& target) {
  CoverCheck res;
  auto fail = [&](std::string why) {
    res.ok = false;
    res.issue = std::move(why);
    return res;
  };
  for (const auto& fam : tc.families) {
    for (const auto& s : fam) {
      if (s.empty()) return fail("empty set");
      for (int p : s)
        if (p < 0 || p >= X.size()) return fail("point outside space");
      if (D && X.set_diameter(s) > *D) return fail("diameter budget exceeded");
    }
    for (std::size_t a = 0; a < fam.size(); ++a)
      for (std::size_t b = a + 1; b < fam.size(); ++b)
        if (X.set_distance(fam[a], fam[b]) <= R)
          return fail("family not R-disjoint");
  }
  std::vector<bool> seen(X.size(), false);
  for (int p : tc.covered_points(X.size())) seen[p] = true;
  if (target.empty()) {
    for (int p = 0; p < X.size(); ++p)
      if (!seen[p]) return fail("point not covered");
  } else {
    for (int p : target)
      if (!seen[p]) return fail("target point not covered");
  }
  return res;
}

int r_multiplicity(const FiniteMetricSpace& X,
                   const std::vector<PointSet>& cover, const Rat& R) {
  int best = 0;
  for (int x = 0; x < X.size(); ++x) {
    int c = 0;
    for (const auto& s : cover)
      if (X.point_set_distance(x, s) <= R) ++c;
    best = std::max(best, c);
  }
  return best;
}

CoverStats cover_stats(const FiniteMetricSpace& X,
                       const std::vector<PointSet>& cover,
                       const std::optional<Rat>& R) {
  if (cover.empty()) throw std::invalid_argument("cover_stats: empty cover");
  std::vector<bool> seen(X.size(), false);
  for (const auto& s : cover) {
    if (s.empty()) throw std::invalid_argument("cover_stats: empty set");
    for (int p : s) {
      if (p < 0 || p >= X.size())
        throw std::invalid_argument("cover_stats: set not a subset of the space");
      seen[p] = true;
    }
  }
  for (int p = 0; p < X.size(); ++p)
    if (!seen[p]) throw std::invalid_argument("cover_stats: not a cover");

  CoverStats st;
  for (int x = 0; x < X.size(); ++x) {
    int c = 0;
    for (const auto& s : cover)
      if (std::binary_search(s.begin(), s.end(), x)) ++c;
    st.multiplicity = std::max(st.multiplicity, c);
  }
  for (const auto& s : cover) st.max_diameter = std::max(st.max_diameter, X.set_diameter(s));
  if (R) st.r_multiplicity = r_multiplicity(X, cover, *R);

  // Lebesgue scan: exponential in |X| by design.
  if (X.size() > 22)
    throw std::length_error("cover_stats: Lebesgue scan capped at 22 points");
  std::vector<Mask> covm;
  for (const auto& s : cover) covm.push_back(points_to_mask(s));
  auto all_fit_at = [&](const Rat& r) {
    auto within = within_masks(X, r);
    for (Mask t : maximal_of(threshold_cliques(X, within))) {
      bool fit = false;
      for (Mask c : covm)
        if ((t & ~c) == 0) {
          fit = true;
          break;
        }
      if (!fit) return false;
    }
    return true;
  };
  auto values = X.distance_values();
  std::optional<Rat> best;
  for (const auto& r : values) {
    if (!all_fit_at(r)) break;
    best = r;
  }
  if (!best) throw std::logic_error("cover_stats: singleton fit failed");
  if (*best == values.back())
    st.lebesgue = std::nullopt;  // every subset fits
  else
    st.lebesgue = best;
  return st;
}

SolveResult solve_ad(const FiniteMetricSpace& X, const BudgetedDimensionQuery& q,
                     const SolveOptions& opts) {
  require_exact_size(X, opts);
  const int n = X.size();
  auto withinD = within_masks(X, q.D);
  std::vector<Mask> candidates = threshold_cliques(X, withinD);

  // Lebesgue > R holds iff every subset of diameter <= r* fits, where r* is
  // the smallest realized distance value above R; if none exists the whole
  // space has to fit inside one set.
  std::optional<Rat> rstar;
  for (const auto& v : X.distance_values())
    if (v > q.R) {
      rstar = v;
      break;
    }
  std::vector<Mask> items;
  if (rstar) {
    items = maximal_of(threshold_cliques(X, within_masks(X, *rstar)));
  } else {
    items = {n == 31 ? ~Mask(0) >> 1 : (Mask(1) << n) - 1};
  }

  struct Ctx {
    std::vector<int> count;
    int limit = 0;
  } ctx;
  ctx.count.assign(n, 0);

  for (int nn = 0; nn <= q.m_max; ++nn) {
    ctx.limit = nn + 1;
    std::fill(ctx.count.begin(), ctx.count.end(), 0);
    FitSearch fs{items, candidates, {}, {}, nullptr, nullptr, nullptr, &ctx};
    fs.can_add = [](void* c, Mask s) {
      auto* t = static_cast<Ctx*>(c);
      for (int p : mask_to_points(s))
        if (t->count[p] + 1 > t->limit) return false;
      return true;
    };
    fs.apply = [](void* c, Mask s) {
      auto* t = static_cast<Ctx*>(c);
      for (int p : mask_to_points(s)) ++t->count[p];
    };
    fs.revert = [](void* c, Mask s) {
      auto* t = static_cast<Ctx*>(c);
      for (int p : mask_to_points(s)) --t->count[p];
    };
    if (fs.run()) {
      SolveResult res;
      res.value = nn;
      for (Mask m : fs.chosen) res.cover.push_back(mask_to_points(m));
      return res;
    }
  }
  return {};
}

SolveResult solve_rmult(const FiniteMetricSpace& X,
                        const BudgetedDimensionQuery& q,
                        const SolveOptions& opts) {
  require_exact_size(X, opts);
  const int n = X.size();
  auto withinD = within_masks(X, q.D);
  auto withinR = within_masks(X, q.R);
  std::vector<Mask> candidates = threshold_cliques(X, withinD);

  // points whose R-ball meets the candidate
  std::vector<Mask> ballhit(candidates.size(), 0);
  for (std::size_t i = 0; i < candidates.size(); ++i)
    for (int p : mask_to_points(candidates[i])) ballhit[i] |= withinR[p];

  std::vector<Mask> items;
  for (int p = 0; p < n; ++p) items.push_back(Mask(1) << p);

  struct Ctx {
    std::vector<int> count;
    int limit = 0;
    std::vector<Mask> cands;
    std::vector<Mask> hits;
    Mask hit_of(Mask s) const {
      for (std::size_t i = 0; i < cands.size(); ++i)
        if (cands[i] == s) return hits[i];
      return 0;
    }
  } ctx;
  ctx.count.assign(n, 0);
  ctx.cands = candidates;
  ctx.hits = ballhit;

  for (int nn = 0; nn <= q.m_max; ++nn) {
    ctx.limit = nn + 1;
    std::fill(ctx.count.begin(), ctx.count.end(), 0);
    FitSearch fs{items, candidates, {}, {}, nullptr, nullptr, nullptr, &ctx};
    fs.can_add = [](void* c, Mask s) {
      auto* t = static_cast<Ctx*>(c);
      for (int p : mask_to_points(t->hit_of(s)))
        if (t->count[p] + 1 > t->limit) return false;
      return true;
    };
    fs.apply = [](void* c, Mask s) {
      auto* t = static_cast<Ctx*>(c);
      for (int p : mask_to_points(t->hit_of(s))) ++t->count[p];
    };
    fs.revert = [](void* c, Mask s) {
      auto* t = static_cast<Ctx*>(c);
      for (int p : mask_to_points(t->hit_of(s))) --t->count[p];
    };
    if (fs.run()) {
      SolveResult res;
      res.value = nn;
      for (Mask m : fs.chosen) res.cover.push_back(mask_to_points(m));
      return res;
    }
  }
  return {};
}

namespace {

/// Partition search shared shape for the family solvers: assign the lowest
/// unassigned point to a fresh cell together with a tag, where cell
/// admissibility and cell-vs-family conflicts come from the callers' masks.
struct PartitionSearch {
  int n_points = 0;
  int n_tags = 0;
  const std::vector<Mask>* cell_base = nullptr;      // per point: allowed partners
  const std::vector<Mask>* conflict = nullptr;       // per point: conflicting points
  std::vector<Mask> fam_union;
  std::vector<std::vector<Mask>> fam_members;
  int used = 0;

  bool feasible_cell(Mask s) const {
    for (Mask m = s; m;) {
      int p = lowest_bit(m);
      m &= m - 1;
      if ((s & ~(*cell_base)[p]) != 0) return false;
    }
    return true;
  }

  bool rec(Mask unassigned) {
    if (unassigned == 0) return true;
    int x = lowest_bit(unassigned);
    Mask self = Mask(1) << x;
    Mask allowed = unassigned & (*cell_base)[x] & ~self;
    Mask sub = allowed;
    while (true) {
      Mask s = sub | self;
      if (feasible_cell(s)) {
        Mask cm = 0;
        for (int p : mask_to_points(s)) cm |= (*conflict)[p];
        int tag_cap = std::min(used, n_tags - 1);
        for (int l = 0; l <= tag_cap; ++l) {
          if ((fam_union[l] & cm) != 0) continue;
          bool fresh = (l == used);
          fam_union[l] |= s;
          fam_members[l].push_back(s);
          if (fresh) ++used;
          if (rec(unassigned & ~s)) return true;
          if (fresh) --used;
          fam_members[l].pop_back();
          fam_union[l] = 0;
          for (Mask mm : fam_members[l]) fam_union[l] |= mm;
        }
      }
      if (sub == 0) break;
      sub = (sub - 1) & allowed;
    }
    return false;
  }
};

TaggedCover members_to_cover(const std::vector<std::vector<Mask>>& fams,
                             int tags) {
  TaggedCover tc;
  for (int l = 0; l < tags; ++l) {
    std::vector<PointSet> fam;
    for (Mask m : fams[l]) fam.push_back(mask_to_points(m));
    tc.families.push_back(std::move(fam));
  }
  return tc;
}

}  // namespace

SolveResult solve_families(const FiniteMetricSpace& X,
                           const BudgetedDimensionQuery& q,
                           const SolveOptions& opts) {
  require_exact_size(X, opts);
  const int n = X.size();
  auto withinD = within_masks(X, q.D);
  auto withinR = within_masks(X, q.R);  // conflicts: distance <= R

  Mask all = (n == 31) ? (~Mask(0) >> 1) : ((Mask(1) << n) - 1);
  for (int nn = 0; nn <= q.m_max; ++nn) {
    PartitionSearch ps;
    ps.n_points = n;
    ps.n_tags = nn + 1;
    ps.cell_base = &withinD;
    ps.conflict = &withinR;
    ps.fam_union.assign(nn + 1, 0);
    ps.fam_members.assign(nn + 1, {});
    if (ps.rec(all)) {
      SolveResult res;
      res.value = nn;
      res.tagged = members_to_cover(ps.fam_members, nn + 1);
      return res;
    }
  }
  return {};
}

SolveResult solve_coarse(const FiniteMetricSpace& X, const Entourage& E,
                         const Entourage& F_budget, int m_max,
                         const SolveOptions& opts) {
  require_exact_size(X, opts);
  if (E.space_fingerprint() != X.fingerprint() ||
      F_budget.space_fingerprint() != X.fingerprint())
    throw std::invalid_argument("solve_coarse: entourage over a different space");
  const int n = X.size();

  std::vector<Mask> frow(n, 0), firow(n, 0), conflict(n, 0);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      if (F_budget.contains(p, q)) frow[p] |= Mask(1) << q;
      if (F_budget.contains(q, p)) firow[p] |= Mask(1) << q;
      // (p,q) or (q,p) in E makes p and q conflict across a family
      if (E.contains(p, q) || E.contains(q, p)) conflict[p] |= Mask(1) << q;
    }
  // cell membership needs all ordered pairs inside F
  std::vector<Mask> cell_base(n, 0);
  for (int p = 0; p < n; ++p) cell_base[p] = frow[p] & firow[p];

  Mask all = (n == 31) ? (~Mask(0) >> 1) : ((Mask(1) << n) - 1);
  for (int m = 0; m <= m_max; ++m) {
    PartitionSearch ps;
    ps.n_points = n;
    ps.n_tags = m + 1;
    ps.cell_base = &cell_base;
    ps.conflict = &conflict;
    ps.fam_union.assign(m + 1, 0);
    ps.fam_members.assign(m + 1, {});
    if (ps.rec(all)) {
      SolveResult res;
      res.value = m;
      res.tagged = members_to_cover(ps.fam_members, m + 1);
      return res;
    }
  }
  return {};
}

TaggedCover box_allocate(const FiniteMetricSpace& X,
                         const std::vector<PointSet>& cover, const Rat& R,
                         std::optional<int> boxes_opt) {
  for (const auto& s : cover) {
    if (s.empty()) throw std::invalid_argument("box_allocate: empty set");
    for (int p : s)
      if (p < 0 || p >= X.size())
        throw std::invalid_argument("box_allocate: set not in the space");
  }
  const int mr = r_multiplicity(X, cover, R);
  const int boxes = boxes_opt.value_or(mr);
  if (boxes < 1) throw std::invalid_argument("box_allocate: need at least one box");
  if (mr > boxes)
    throw std::invalid_argument("box_allocate: m_R exceeds the box count");

  // Step 1: irreducible subcover of the input coverage.
  std::vector<PointSet> sub = cover;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < sub.size(); ++i) {
      std::vector<bool> others(X.size(), false);
      for (std::size_t j = 0; j < sub.size(); ++j)
        if (j != i)
          for (int p : sub[j]) others[p] = true;
      bool redundant = true;
      for (int p : sub[i])
        if (!others[p]) {
          redundant = false;
          break;
        }
      if (redundant && sub.size() > 1) {
        sub.erase(sub.begin() + static_cast<long>(i));
        changed = true;
        break;
      }
    }
  }

  // Step 2: seed the boxes, preferring a ball attaining the box count.
  std::vector<std::size_t> seed_ids;
  for (int x = 0; x < X.size() && seed_ids.empty(); ++x) {
    std::vector<std::size_t> meet;
    for (std::size_t i = 0; i < sub.size(); ++i)
      if (X.point_set_distance(x, sub[i]) <= R) meet.push_back(i);
    if (static_cast<int>(meet.size()) == boxes) seed_ids = meet;
  }
  if (seed_ids.empty())
    for (std::size_t i = 0; i < sub.size() && static_cast<int>(seed_ids.size()) < boxes; ++i)
      seed_ids.push_back(i);

  std::vector<std::vector<PointSet>> box(boxes);
  std::vector<bool> is_seed(sub.size(), false);
  for (std::size_t k = 0; k < seed_ids.size(); ++k) {
    box[k].push_back(sub[seed_ids[k]]);
    is_seed[seed_ids[k]] = true;
  }

  // Step 3: split each remaining set into pieces, box by box.
  auto far_from_box = [&](int p, const std::vector<PointSet>& b) {
    for (const auto& s : b)
      if (X.point_set_distance(p, s) <= R) return false;
    return true;
  };
  for (std::size_t k = 0; k < sub.size(); ++k) {
    if (is_seed[k]) continue;
    std::vector<int> rem = sub[k];
    for (int l = 0; l < boxes && !rem.empty(); ++l) {
      PointSet piece;
      std::vector<int> keep;
      for (int p : rem)
        (far_from_box(p, box[l]) ? piece : keep).push_back(p);
      if (!piece.empty()) box[l].push_back(piece);
      rem = std::move(keep);
    }
    if (!rem.empty())
      throw std::runtime_error(
          "box_allocate: point admits no box; m_R precondition violated");
  }

  TaggedCover tc;
  tc.families = std::move(box);
  return tc;
}

std::pair<int, TaggedCover> greedy_families(const FiniteMetricSpace& X,
                                            const Rat& R, const Rat& D) {
  const int n = X.size();
  std::vector<bool> assigned(n, false);
  std::vector<PointSet> cells;
  for (int seed = 0; seed < n; ++seed) {
    if (assigned[seed]) continue;
    PointSet cell = {seed};
    assigned[seed] = true;
    // sweep outward from the seed
    std::vector<int> order;
    for (int p = 0; p < n; ++p)
      if (!assigned[p]) order.push_back(p);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return X.dist(seed, a) < X.dist(seed, b);
    });
    for (int p : order) {
      bool ok = true;
      for (int q : cell)
        if (X.dist(p, q) > D) {
          ok = false;
          break;
        }
      if (ok) {
        cell.push_back(p);
        assigned[p] = true;
      }
    }
    std::sort(cell.begin(), cell.end());
    cells.push_back(std::move(cell));
  }

  std::vector<int> color(cells.size(), -1);
  int colors = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::vector<bool> taken(cells.size(), false);
    for (std::size_t j = 0; j < i; ++j)
      if (X.set_distance(cells[i], cells[j]) <= R) taken[color[j]] = true;
    int c = 0;
    while (taken[c]) ++c;
    color[i] = c;
    colors = std::max(colors, c + 1);
  }

  TaggedCover tc;
  tc.families.resize(colors);
  for (std::size_t i = 0; i < cells.size(); ++i)
    tc.families[color[i]].push_back(cells[i]);
  return {colors - 1, tc};
}

}  // namespace coarsedim
