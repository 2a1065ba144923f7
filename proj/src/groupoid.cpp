#include "coarsedim/groupoid.hpp"

#include <algorithm>
#include <stdexcept>

namespace coarsedim {

namespace {

std::uint64_t comp_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

}  // namespace

FiniteGroupoid::FiniteGroupoid(
    std::vector<int> src, std::vector<int> rng, std::vector<int> inv,
    std::vector<std::pair<std::pair<int, int>, int>> comp,
    std::vector<std::string> labels, bool partial)
    : src_(std::move(src)),
      rng_(std::move(rng)),
      inv_(std::move(inv)),
      labels_(std::move(labels)),
      partial_(partial) {
  const int m = size();
  if (static_cast<int>(rng_.size()) != m || static_cast<int>(inv_.size()) != m ||
      static_cast<int>(labels_.size()) != m)
    throw std::invalid_argument("groupoid: table sizes do not match");
  for (int g = 0; g < m; ++g)
    if (src_[g] < 0 || src_[g] >= m || rng_[g] < 0 || rng_[g] >= m ||
        inv_[g] < 0 || inv_[g] >= m)
      throw std::invalid_argument("groupoid: arrow id out of range");

  unit_index_.assign(m, -1);
  for (int g = 0; g < m; ++g)
    if (is_unit(g)) {
      unit_index_[g] = static_cast<int>(units_.size());
      units_.push_back(g);
    }
  by_src_.assign(units_.size(), {});
  by_rng_.assign(units_.size(), {});
  for (int g = 0; g < m; ++g) {
    if (unit_index_[src_[g]] < 0 || unit_index_[rng_[g]] < 0)
      throw std::invalid_argument("groupoid: src/rng is not a unit");
    by_src_[unit_index_[src_[g]]].push_back(g);
    by_rng_[unit_index_[rng_[g]]].push_back(g);
  }
  comp_.reserve(comp.size() * 2);
  for (const auto& [ab, c] : comp) {
    auto [a, b] = ab;
    if (a < 0 || a >= m || b < 0 || b >= m || c < 0 || c >= m)
      throw std::invalid_argument("groupoid: composition entry out of range");
    comp_[comp_key(a, b)] = c;
  }
}

int FiniteGroupoid::compose(int a, int b) const {
  auto it = comp_.find(comp_key(a, b));
  return it == comp_.end() ? -1 : it->second;
}

const std::vector<int>& FiniteGroupoid::arrows_with_src(int unit_arrow) const {
  int i = unit_index_[unit_arrow];
  if (i < 0) throw std::invalid_argument("arrows_with_src: not a unit");
  return by_src_[i];
}

const std::vector<int>& FiniteGroupoid::arrows_with_rng(int unit_arrow) const {
  int i = unit_index_[unit_arrow];
  if (i < 0) throw std::invalid_argument("arrows_with_rng: not a unit");
  return by_rng_[i];
}

void FiniteGroupoid::validate() const {
  const int m = size();
  for (int u : units_)
    if (src_[u] != u || rng_[u] != u)
      throw std::invalid_argument("groupoid: unit with moved endpoints");
  for (int g = 0; g < m; ++g) {
    if (inv_[inv_[g]] != g)
      throw std::invalid_argument("groupoid: inverse not an involution");
    if (src_[inv_[g]] != rng_[g] || rng_[inv_[g]] != src_[g])
      throw std::invalid_argument("groupoid: inverse swaps endpoints");
    // unit laws
    if (compose(g, src_[g]) != g || compose(rng_[g], g) != g)
      throw std::invalid_argument("groupoid: unit law fails");
    if (compose(g, inv_[g]) != rng_[g] || compose(inv_[g], g) != src_[g])
      throw std::invalid_argument("groupoid: inverse law fails");
  }
  for (const auto& [key, c] : comp_) {
    int a = static_cast<int>(key >> 32), b = static_cast<int>(key & 0xffffffffu);
    if (src_[a] != rng_[b])
      throw std::invalid_argument("groupoid: composition with mismatched endpoints");
    if (src_[c] != src_[b] || rng_[c] != rng_[a])
      throw std::invalid_argument("groupoid: composite has wrong endpoints");
  }
  if (!partial_) {
    for (int a = 0; a < m; ++a)
      for (int b : by_rng_[unit_index_[src_[a]]])
        if (compose(a, b) < 0)
          throw std::invalid_argument("groupoid: missing composition");
  }
  // associativity over composable triples, where defined in partial mode
  for (int b = 0; b < m; ++b) {
    const auto& lefts = by_rng_[unit_index_[rng_[b]]];   // a with s(a) = r(b)
    const auto& rights = by_src_[unit_index_[src_[b]]];  // c with r(c) = s(b)
    (void)lefts;
    for (int a : by_src_[unit_index_[rng_[b]]])  // src(a) == rng(b)
      for (int c : rights) {
        int ab = compose(a, b), bc = compose(b, c);
        if (ab < 0 || bc < 0) continue;
        int l = compose(ab, c), r = compose(a, bc);
        if (l < 0 || r < 0) continue;
        if (l != r) throw std::invalid_argument("groupoid: associativity fails");
      }
  }
}

void validate_length(const FiniteGroupoid& G, const LengthFunction& len) {
  if (static_cast<int>(len.values.size()) != G.size())
    throw std::invalid_argument("length: size mismatch");
  for (int g = 0; g < G.size(); ++g) {
    if (len.values[g] < Rat(0))
      throw std::invalid_argument("length: negative value");
    if ((len.values[g] == Rat(0)) != G.is_unit(g))
      throw std::invalid_argument("length: zero set is not the unit space");
    if (len.values[G.inv(g)] != len.values[g])
      throw std::invalid_argument("length: not symmetric");
  }
  for (int b = 0; b < G.size(); ++b)
    for (int a : G.arrows_with_src(G.rng(b))) {
      int ab = G.compose(a, b);
      if (ab < 0) continue;
      if (len.values[ab] > len.values[a] + len.values[b])
        throw std::invalid_argument("length: not subadditive");
    }
}

std::vector<int> arrows_below_length(const FiniteGroupoid& G,
                                     const LengthFunction& len, const Rat& R) {
  std::vector<int> out;
  for (int g = 0; g < G.size(); ++g)
    if (len.values[g] < R) out.push_back(g);
  return out;
}

void GroupAction::validate() const {
  group.validate();
  const int n = n_points();
  if (static_cast<int>(act.size()) != group.size())
    throw std::invalid_argument("action: table has wrong group size");
  for (const auto& row : act) {
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("action: table has wrong point count");
    std::vector<bool> seen(n, false);
    for (int y : row) {
      if (y < 0 || y >= n || seen[y])
        throw std::invalid_argument("action: not a bijection");
      seen[y] = true;
    }
  }
  for (int x = 0; x < n; ++x)
    if (act[group.identity][x] != x)
      throw std::invalid_argument("action: identity does not fix points");
  for (int a = 0; a < group.size(); ++a)
    for (int b = 0; b < group.size(); ++b) {
      int ab = group.product(a, b);
      if (ab < 0) continue;
      for (int x = 0; x < n; ++x)
        if (act[ab][x] != act[a][act[b][x]])
          throw std::invalid_argument("action: not compatible with products");
    }
}

GroupAction GroupAction::rotation(int n) {
  GroupAction a;
  a.group = Group::cyclic(n);
  for (int x = 0; x < n; ++x) a.point_names.push_back(std::to_string(x));
  a.act.assign(n, std::vector<int>(n));
  for (int g = 0; g < n; ++g)
    for (int x = 0; x < n; ++x) a.act[g][x] = (g + x) % n;
  return a;
}

GroupAction GroupAction::regular(const Group& g) {
  GroupAction a;
  a.group = g;
  a.point_names = g.elems;
  a.act.assign(g.size(), std::vector<int>(g.size()));
  for (int x = 0; x < g.size(); ++x)
    for (int y = 0; y < g.size(); ++y) {
      int p = g.product(x, y);
      if (p < 0)
        throw std::invalid_argument("regular action needs a total group");
      a.act[x][y] = p;
    }
  return a;
}

GroupAction GroupAction::trivial_on(int k) {
  if (k < 1) throw std::invalid_argument("trivial action: need k >= 1");
  GroupAction a;
  a.group = Group::trivial();
  for (int x = 0; x < k; ++x) a.point_names.push_back(std::to_string(x));
  a.act.assign(1, std::vector<int>(k));
  for (int x = 0; x < k; ++x) a.act[0][x] = x;
  return a;
}

std::pair<FiniteGroupoid, LengthFunction> build_pair_groupoid(
    const FiniteMetricSpace& X) {
  const int n = X.size();
  const int m = n * n;
  auto id = [n](int x, int y) { return x * n + y; };
  std::vector<int> src(m), rng(m), inv(m);
  std::vector<std::string> labels(m);
  LengthFunction len;
  len.values.resize(m);
  std::vector<std::pair<std::pair<int, int>, int>> comp;
  comp.reserve(static_cast<std::size_t>(n) * n * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      int g = id(x, y);
      src[g] = id(y, y);
      rng[g] = id(x, x);
      inv[g] = id(y, x);
      labels[g] = "(" + X.points()[x] + "," + X.points()[y] + ")";
      len.values[g] = X.dist(x, y);
      for (int z = 0; z < n; ++z) comp.push_back({{g, id(y, z)}, id(x, z)});
    }
  return {FiniteGroupoid(std::move(src), std::move(rng), std::move(inv),
                         std::move(comp), std::move(labels)),
          std::move(len)};
}

std::pair<FiniteGroupoid, LengthFunction> build_transformation_groupoid(
    const GroupAction& action) {
  action.validate();
  const int n = action.n_points();
  const int k = action.group.size();
  const int m = n * k;
  auto id = [n](int gamma, int x) { return gamma * n + x; };
  const int e = action.group.identity;

  std::vector<int> src(m), rng(m), inv(m);
  std::vector<std::string> labels(m);
  LengthFunction len;
  len.values.resize(m);
  std::vector<std::pair<std::pair<int, int>, int>> comp;
  for (int gamma = 0; gamma < k; ++gamma)
    for (int x = 0; x < n; ++x) {
      int g = id(gamma, x);
      int gx = action.apply(gamma, x);
      src[g] = id(e, x);
      rng[g] = id(e, gx);
      inv[g] = id(action.group.inv[gamma], gx);
      labels[g] = "(" + action.point_names[gx] + "," +
                  action.group.elems[gamma] + "," + action.point_names[x] + ")";
      len.values[g] = action.group.length[gamma];
    }
  // (g2 g1 x, g2, g1 x)(g1 x, g1, x) = (g2 g1 x, g2 g1, x)
  for (int g1 = 0; g1 < k; ++g1)
    for (int x = 0; x < n; ++x) {
      int g1x = action.apply(g1, x);
      for (int g2 = 0; g2 < k; ++g2) {
        int prod = action.group.product(g2, g1);
        if (prod < 0) continue;  // leaves the ball: undefined
        comp.push_back({{id(g2, g1x), id(g1, x)}, id(prod, x)});
      }
    }
  return {FiniteGroupoid(std::move(src), std::move(rng), std::move(inv),
                         std::move(comp), std::move(labels),
                         action.group.partial),
          std::move(len)};
}

ArrowSetResult generate_subgroupoid(const FiniteGroupoid& G,
                                    const std::vector<int>& S) {
  ArrowSetResult res;
  std::vector<char> in(G.size(), 0);
  std::vector<int> work;
  auto push = [&](int g) {
    if (!in[g]) {
      in[g] = 1;
      work.push_back(g);
    }
  };
  for (int g : S) {
    if (g < 0 || g >= G.size())
      throw std::invalid_argument("generate_subgroupoid: arrow out of range");
    push(g);
    push(G.src(g));
    push(G.rng(g));
  }
  std::vector<std::vector<int>> members_by_src(G.n_units());
  std::vector<std::vector<int>> members_by_rng(G.n_units());
  std::size_t head = 0;
  while (head < work.size()) {
    int g = work[head++];
    push(G.inv(g));
    // compose with everything already present, both ways
    for (int a : members_by_src[G.unit_index(G.rng(g))]) {
      int c = G.compose(a, g);
      if (c < 0)
        res.hit_undefined = true;
      else
        push(c);
    }
    for (int b : members_by_rng[G.unit_index(G.src(g))]) {
      int c = G.compose(g, b);
      if (c < 0)
        res.hit_undefined = true;
      else
        push(c);
    }
    // self-composition when endpoints loop
    if (G.src(g) == G.rng(g)) {
      int c = G.compose(g, g);
      if (c < 0)
        res.hit_undefined = true;
      else
        push(c);
    }
    members_by_src[G.unit_index(G.src(g))].push_back(g);
    members_by_rng[G.unit_index(G.rng(g))].push_back(g);
  }
  for (int g = 0; g < G.size(); ++g)
    if (in[g]) res.arrows.push_back(g);
  return res;
}

ArrowSetResult arrow_product_set(const FiniteGroupoid& G,
                                 const std::vector<int>& A,
                                 const std::vector<int>& B) {
  ArrowSetResult res;
  std::vector<std::vector<int>> b_by_rng(G.n_units());
  for (int b : B) b_by_rng[G.unit_index(G.rng(b))].push_back(b);
  std::vector<char> in(G.size(), 0);
  for (int a : A)
    for (int b : b_by_rng[G.unit_index(G.src(a))]) {
      int c = G.compose(a, b);
      if (c < 0)
        res.hit_undefined = true;
      else
        in[c] = 1;
    }
  for (int g = 0; g < G.size(); ++g)
    if (in[g]) res.arrows.push_back(g);
  return res;
}

ArrowSetResult arrow_power(const FiniteGroupoid& G, const std::vector<int>& A,
                           long long n) {
  if (n < 0) throw std::invalid_argument("arrow_power: negative exponent");
  ArrowSetResult res;
  if (n == 0) {
    res.arrows = G.units();
    return res;
  }
  res.arrows = A;
  std::sort(res.arrows.begin(), res.arrows.end());
  const long long iteration_cap = 1000000;
  for (long long k = 2; k <= n; ++k) {
    if (k > iteration_cap)
      throw std::length_error("arrow_power: no fixed point within cap");
    ArrowSetResult next = arrow_product_set(G, A, res.arrows);
    next.hit_undefined = next.hit_undefined || res.hit_undefined;
    if (next.arrows == res.arrows) {
      next.hit_undefined = res.hit_undefined;
      return next;  // fixed point: all higher powers coincide
    }
    res = std::move(next);
  }
  return res;
}

std::pair<FiniteGroupoid, LengthFunction> alexandrov(
    const FiniteGroupoid& G, const LengthFunction& len) {
  const int m = G.size();
  std::vector<int> src(m + 1), rng(m + 1), inv(m + 1);
  std::vector<std::string> labels;
  std::vector<std::pair<std::pair<int, int>, int>> comp;
  for (int g = 0; g < m; ++g) {
    src[g] = G.src(g);
    rng[g] = G.rng(g);
    inv[g] = G.inv(g);
    labels.push_back(G.label(g));
    for (int b : G.arrows_with_rng(G.src(g))) {
      int c = G.compose(g, b);
      if (c >= 0) comp.push_back({{g, b}, c});
    }
  }
  src[m] = rng[m] = inv[m] = m;
  labels.push_back("inf");
  comp.push_back({{m, m}, m});
  LengthFunction l2 = len;
  l2.values.push_back(Rat(0));
  return {FiniteGroupoid(std::move(src), std::move(rng), std::move(inv),
                         std::move(comp), std::move(labels), G.partial()),
          std::move(l2)};
}

std::vector<int> s_fiber(const FiniteGroupoid& G, int unit_arrow) {
  if (unit_arrow < 0 || unit_arrow >= G.size() || !G.is_unit(unit_arrow))
    throw std::invalid_argument("s_fiber: not a unit");
  auto out = G.arrows_with_src(unit_arrow);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> r_fiber(const FiniteGroupoid& G, int unit_arrow) {
  if (unit_arrow < 0 || unit_arrow >= G.size() || !G.is_unit(unit_arrow))
    throw std::invalid_argument("r_fiber: not a unit");
  auto out = G.arrows_with_rng(unit_arrow);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace coarsedim
