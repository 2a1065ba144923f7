#include "coarsedim/space.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace coarsedim {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> points,
                                     std::vector<std::vector<Rat>> dist)
    : points_(std::move(points)), dist_(std::move(dist)) {
  const int n = size();
  if (n == 0) throw std::invalid_argument("space: empty point set");
  if (static_cast<int>(dist_.size()) != n)
    throw std::invalid_argument("space: matrix row count mismatch");
  for (const auto& row : dist_)
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("space: matrix not square");

  for (int i = 0; i < n; ++i) {
    if (dist_[i][i] != Rat(0))
      throw std::invalid_argument("space: nonzero diagonal");
    for (int j = 0; j < n; ++j) {
      if (i != j && dist_[i][j] <= Rat(0))
        throw std::invalid_argument("space: non-positive off-diagonal distance");
      if (dist_[i][j] != dist_[j][i])
        throw std::invalid_argument("space: matrix not symmetric");
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (dist_[i][k] > dist_[i][j] + dist_[j][k])
          throw std::invalid_argument("space: triangle inequality fails");

  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (const auto& p : points_) h = mix(h, std::hash<std::string>{}(p));
  for (const auto& row : dist_)
    for (const auto& d : row) {
      h = mix(h, static_cast<std::uint64_t>(d.numerator()));
      h = mix(h, static_cast<std::uint64_t>(d.denominator()));
    }
  fingerprint_ = h;
}

Rat FiniteMetricSpace::diameter() const {
  Rat m(0);
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j) m = std::max(m, dist_[i][j]);
  return m;
}

Rat FiniteMetricSpace::set_diameter(const std::vector<int>& s) const {
  Rat m(0);
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = a + 1; b < s.size(); ++b)
      m = std::max(m, dist_[s[a]][s[b]]);
  return m;
}

Rat FiniteMetricSpace::set_distance(const std::vector<int>& a,
                                    const std::vector<int>& b) const {
  if (a.empty() || b.empty())
    throw std::invalid_argument("set_distance: empty set");
  bool first = true;
  Rat m(0);
  for (int x : a)
    for (int y : b) {
      if (first || dist_[x][y] < m) m = dist_[x][y];
      first = false;
    }
  return m;
}

Rat FiniteMetricSpace::point_set_distance(int x, const std::vector<int>& s) const {
  return set_distance({x}, s);
}

std::vector<int> FiniteMetricSpace::ball(int x, const Rat& r) const {
  std::vector<int> out;
  for (int y = 0; y < size(); ++y)
    if (dist_[x][y] <= r) out.push_back(y);
  return out;
}

std::vector<Rat> FiniteMetricSpace::distance_values() const {
  std::set<Rat> vals;
  vals.insert(Rat(0));
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j) vals.insert(dist_[i][j]);
  return {vals.begin(), vals.end()};
}

namespace {

FiniteMetricSpace from_integer_matrix(std::vector<std::string> names,
                                      const std::vector<std::vector<long long>>& d) {
  std::vector<std::vector<Rat>> m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    for (long long v : d[i]) m[i].push_back(Rat(v));
  return FiniteMetricSpace(std::move(names), std::move(m));
}

}  // namespace

FiniteMetricSpace gen_path(int n) {
  if (n < 1) throw std::invalid_argument("path: need n >= 1");
  std::vector<std::string> names;
  std::vector<std::vector<long long>> d(n, std::vector<long long>(n, 0));
  for (int i = 0; i < n; ++i) {
    names.push_back(std::to_string(i));
    for (int j = 0; j < n; ++j) d[i][j] = std::llabs(i - j);
  }
  return from_integer_matrix(std::move(names), d);
}

FiniteMetricSpace gen_cycle(int n) {
  if (n < 1) throw std::invalid_argument("cycle: need n >= 1");
  std::vector<std::string> names;
  std::vector<std::vector<long long>> d(n, std::vector<long long>(n, 0));
  for (int i = 0; i < n; ++i) {
    names.push_back(std::to_string(i));
    for (int j = 0; j < n; ++j) {
      long long a = std::llabs(i - j);
      d[i][j] = std::min(a, n - a);
    }
  }
  return from_integer_matrix(std::move(names), d);
}

FiniteMetricSpace gen_grid(const std::vector<int>& dims, const GenOptions& opts) {
  if (dims.empty()) throw std::invalid_argument("grid: need at least one dimension");
  long long total = 1;
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("grid: dimensions must be >= 1");
    total *= d;
    if (total > opts.point_cap)
      throw std::length_error("grid: point cap exceeded");
  }
  const int k = static_cast<int>(dims.size());
  const int n = static_cast<int>(total);
  auto decode = [&](int idx) {
    std::vector<int> t(k);
    for (int i = k - 1; i >= 0; --i) {
      t[i] = idx % dims[i];
      idx /= dims[i];
    }
    return t;
  };
  std::vector<std::string> names;
  std::vector<std::vector<long long>> d(n, std::vector<long long>(n, 0));
  std::vector<std::vector<int>> coords;
  for (int a = 0; a < n; ++a) {
    coords.push_back(decode(a));
    std::string name = "(";
    for (int i = 0; i < k; ++i)
      name += (i ? "," : "") + std::to_string(coords[a][i]);
    names.push_back(name + ")");
  }
  // grid-graph shortest path = l1 distance
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      long long s = 0;
      for (int i = 0; i < k; ++i) s += std::abs(coords[a][i] - coords[b][i]);
      d[a][b] = s;
    }
  return from_integer_matrix(std::move(names), d);
}

FiniteMetricSpace gen_dirsum(const std::vector<long long>& weights,
                             long long radius, const GenOptions& opts) {
  if (weights.empty()) throw std::invalid_argument("dirsum: need weights");
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0)
      throw std::invalid_argument("dirsum: weights must be positive");
    if (i > 0 && weights[i] <= weights[i - 1])
      throw std::invalid_argument("dirsum: weights must be strictly increasing");
  }
  if (radius < 0) throw std::invalid_argument("dirsum: negative radius");

  const int k = static_cast<int>(weights.size());
  std::vector<std::vector<long long>> tuples;
  std::vector<long long> cur(k, 0);
  std::function<void(int, long long)> rec = [&](int i, long long budget) {
    if (i == k) {
      tuples.push_back(cur);
      if (static_cast<long long>(tuples.size()) > opts.point_cap)
        throw std::length_error("dirsum: point cap exceeded");
      return;
    }
    long long span = budget / weights[i];
    for (long long v = -span; v <= span; ++v) {
      cur[i] = v;
      rec(i + 1, budget - std::llabs(v) * weights[i]);
    }
    cur[i] = 0;
  };
  rec(0, radius);
  std::sort(tuples.begin(), tuples.end());

  const int n = static_cast<int>(tuples.size());
  std::vector<std::string> names;
  std::vector<std::vector<long long>> d(n, std::vector<long long>(n, 0));
  for (int a = 0; a < n; ++a) {
    std::string name = "(";
    for (int i = 0; i < k; ++i)
      name += (i ? "," : "") + std::to_string(tuples[a][i]);
    names.push_back(name + ")");
    for (int b = 0; b < n; ++b) {
      long long s = 0;
      for (int i = 0; i < k; ++i)
        s += weights[i] * std::llabs(tuples[a][i] - tuples[b][i]);
      d[a][b] = s;
    }
  }
  return from_integer_matrix(std::move(names), d);
}

FiniteMetricSpace gen_cayley_ball(const Group& g, const Rat& radius,
                                  const GenOptions& opts) {
  g.validate();
  if (radius < Rat(0)) throw std::invalid_argument("cayley_ball: negative radius");
  std::vector<int> ball;
  for (int a = 0; a < g.size(); ++a)
    if (g.length[a] <= radius) ball.push_back(a);
  if (static_cast<int>(ball.size()) > opts.point_cap)
    throw std::length_error("cayley_ball: point cap exceeded");

  const int n = static_cast<int>(ball.size());
  std::vector<std::string> names;
  std::vector<std::vector<Rat>> d(n, std::vector<Rat>(n, Rat(0)));
  for (int i = 0; i < n; ++i) names.push_back(g.elems[ball[i]]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int q = g.product(g.inv[ball[i]], ball[j]);
      if (q < 0)
        throw std::invalid_argument(
            "cayley_ball: product a^{-1}b undefined; enlarge the group ball");
      d[i][j] = g.length[q];
    }
  return FiniteMetricSpace(std::move(names), std::move(d));
}

Entourage::Entourage(const FiniteMetricSpace& space,
                     std::vector<std::pair<int, int>> pairs)
    : n_(space.size()), space_fp_(space.fingerprint()), succ_(space.size()) {
  for (auto [x, y] : pairs) {
    if (x < 0 || x >= n_ || y < 0 || y >= n_)
      throw std::invalid_argument("entourage: pair out of range");
    succ_[x].push_back(y);
  }
  for (auto& row : succ_) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
}

Entourage Entourage::tube(const FiniteMetricSpace& space, const Rat& R,
                          bool closed) {
  if (R < Rat(0)) throw std::invalid_argument("entourage: negative scale");
  std::vector<std::pair<int, int>> pairs;
  for (int x = 0; x < space.size(); ++x)
    for (int y = 0; y < space.size(); ++y) {
      bool in = closed ? space.dist(x, y) <= R : space.dist(x, y) < R;
      if (in) pairs.emplace_back(x, y);
    }
  return Entourage(space, std::move(pairs));
}

Entourage Entourage::diagonal(const FiniteMetricSpace& space) {
  std::vector<std::pair<int, int>> pairs;
  for (int x = 0; x < space.size(); ++x) pairs.emplace_back(x, x);
  return Entourage(space, std::move(pairs));
}

bool Entourage::contains(int x, int y) const {
  if (x < 0 || x >= n_) return false;
  return std::binary_search(succ_[x].begin(), succ_[x].end(), y);
}

std::size_t Entourage::pair_count() const {
  std::size_t c = 0;
  for (const auto& row : succ_) c += row.size();
  return c;
}

std::vector<std::pair<int, int>> Entourage::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int x = 0; x < n_; ++x)
    for (int y : succ_[x]) out.emplace_back(x, y);
  return out;
}

bool Entourage::subset_of(const Entourage& other) const {
  if (n_ != other.n_ || space_fp_ != other.space_fp_) return false;
  for (int x = 0; x < n_; ++x)
    for (int y : succ_[x])
      if (!other.contains(x, y)) return false;
  return true;
}

bool Entourage::operator==(const Entourage& other) const {
  return space_fp_ == other.space_fp_ && succ_ == other.succ_;
}

Entourage entourage_compose(const Entourage& E, const Entourage& F) {
  if (E.space_fp_ != F.space_fp_)
    throw std::invalid_argument("entourage_compose: mismatched spaces");
  Entourage out(E.n_, E.space_fp_);
  std::vector<bool> row(E.n_);
  for (int x = 0; x < E.n_; ++x) {
    std::fill(row.begin(), row.end(), false);
    for (int z : E.succ_[x])
      for (int y : F.succ_[z]) row[y] = true;
    for (int y = 0; y < E.n_; ++y)
      if (row[y]) out.succ_[x].push_back(y);
  }
  return out;
}

Entourage entourage_invert(const Entourage& E) {
  Entourage out(E.n_, E.space_fp_);
  for (int x = 0; x < E.n_; ++x)
    for (int y : E.succ_[x]) out.succ_[y].push_back(x);
  for (auto& row : out.succ_) std::sort(row.begin(), row.end());
  return out;
}

}  // namespace coarsedim
