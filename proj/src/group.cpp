#include "coarsedim/group.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>

namespace coarsedim {

namespace {

long long cyclic_word_length(long long a, long long n) {
  a = ((a % n) + n) % n;
  return std::min(a, n - a);
}

}  // namespace

void Group::validate() const {
  const int n = size();
  if (n == 0) throw std::invalid_argument("group: empty element list");
  if (identity < 0 || identity >= n)
    throw std::invalid_argument("group: identity out of range");
  if (static_cast<int>(mult.size()) != n ||
      static_cast<int>(inv.size()) != n ||
      static_cast<int>(length.size()) != n)
    throw std::invalid_argument("group: table sizes do not match");

  for (int a = 0; a < n; ++a) {
    if (mult[identity][a] != a || mult[a][identity] != a)
      throw std::invalid_argument("group: identity law fails");
    if (inv[a] < 0 || inv[a] >= n || inv[inv[a]] != a)
      throw std::invalid_argument("group: inverse not an involution");
    if (mult[a][inv[a]] != identity || mult[inv[a]][a] != identity)
      throw std::invalid_argument("group: inverse law fails");
    if ((length[a] == Rat(0)) != (a == identity))
      throw std::invalid_argument("group: length zero set is not {identity}");
    if (length[a] < Rat(0)) throw std::invalid_argument("group: negative length");
    if (length[inv[a]] != length[a])
      throw std::invalid_argument("group: length not symmetric");
  }

  auto check_triple = [&](int a, int b, int c) {
    int ab = mult[a][b], bc = mult[b][c];
    if (ab < 0 || bc < 0) return;
    int l = mult[ab][c], r = mult[a][bc];
    if (l < 0 || r < 0) return;  // partial: only compare where defined
    if (l != r) throw std::invalid_argument("group: non-associative sample detected");
  };
  if (n <= 48) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) check_triple(a, b, c);
  } else {
    // deterministic LCG sample
    std::uint64_t s = 0x9e3779b97f4a7c15ULL;
    for (int k = 0; k < 200000; ++k) {
      s = s * 6364136223846793005ULL + 1442695040888963407ULL;
      int a = static_cast<int>((s >> 33) % n);
      s = s * 6364136223846793005ULL + 1442695040888963407ULL;
      int b = static_cast<int>((s >> 33) % n);
      s = s * 6364136223846793005ULL + 1442695040888963407ULL;
      int c = static_cast<int>((s >> 33) % n);
      check_triple(a, b, c);
    }
  }

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int ab = mult[a][b];
      if (ab < 0) continue;
      if (length[ab] > length[a] + length[b])
        throw std::invalid_argument("group: length not subadditive");
    }
}

Group Group::trivial() {
  Group g;
  g.elems = {"e"};
  g.identity = 0;
  g.mult = {{0}};
  g.inv = {0};
  g.length = {Rat(0)};
  return g;
}

Group Group::cyclic(int n) { return abelian({n}); }

Group Group::abelian(const std::vector<int>& orders) {
  if (orders.empty()) return trivial();
  long long total = 1;
  for (int o : orders) {
    if (o < 1) throw std::invalid_argument("abelian: orders must be >= 1");
    total *= o;
    if (total > 100000) throw std::invalid_argument("abelian: group too large");
  }
  const int k = static_cast<int>(orders.size());
  const int n = static_cast<int>(total);

  auto decode = [&](int idx) {
    std::vector<long long> t(k);
    for (int i = k - 1; i >= 0; --i) {
      t[i] = idx % orders[i];
      idx /= orders[i];
    }
    return t;
  };
  auto encode = [&](const std::vector<long long>& t) {
    int idx = 0;
    for (int i = 0; i < k; ++i) idx = idx * orders[i] + static_cast<int>(t[i]);
    return idx;
  };

  Group g;
  g.identity = 0;
  g.mult.assign(n, std::vector<int>(n, -1));
  g.inv.resize(n);
  g.length.resize(n);
  for (int a = 0; a < n; ++a) {
    auto ta = decode(a);
    std::string name;
    for (int i = 0; i < k; ++i) name += (i ? "," : "(") + std::to_string(ta[i]);
    g.elems.push_back(name + ")");
    long long len = 0;
    std::vector<long long> ti(k);
    for (int i = 0; i < k; ++i) {
      len += cyclic_word_length(ta[i], orders[i]);
      ti[i] = (orders[i] - ta[i]) % orders[i];
    }
    g.length[a] = Rat(len);
    g.inv[a] = encode(ti);
    for (int b = 0; b < n; ++b) {
      auto tb = decode(b);
      std::vector<long long> tc(k);
      for (int i = 0; i < k; ++i) tc[i] = (ta[i] + tb[i]) % orders[i];
      g.mult[a][b] = encode(tc);
    }
  }
  return g;
}

Group Group::zball(long long radius) {
  if (radius < 0) throw std::invalid_argument("zball: negative radius");
  const int n = static_cast<int>(2 * radius + 1);
  auto idx = [&](long long v) { return static_cast<int>(v + radius); };
  Group g;
  g.partial = true;
  g.identity = idx(0);
  g.mult.assign(n, std::vector<int>(n, -1));
  g.inv.resize(n);
  g.length.resize(n);
  for (long long a = -radius; a <= radius; ++a) {
    g.elems.push_back(std::to_string(a));
    g.inv[idx(a)] = idx(-a);
    g.length[idx(a)] = Rat(std::llabs(a));
    for (long long b = -radius; b <= radius; ++b)
      if (std::llabs(a + b) <= radius) g.mult[idx(a)][idx(b)] = idx(a + b);
  }
  return g;
}

Group Group::z2ball(long long radius) {
  if (radius < 0) throw std::invalid_argument("z2ball: negative radius");
  std::vector<std::pair<long long, long long>> pts;
  std::map<std::pair<long long, long long>, int> index;
  for (long long x = -radius; x <= radius; ++x)
    for (long long y = -radius; y <= radius; ++y)
      if (std::llabs(x) + std::llabs(y) <= radius) {
        index[{x, y}] = static_cast<int>(pts.size());
        pts.emplace_back(x, y);
      }
  const int n = static_cast<int>(pts.size());
  Group g;
  g.partial = true;
  g.identity = index[{0, 0}];
  g.mult.assign(n, std::vector<int>(n, -1));
  g.inv.resize(n);
  g.length.resize(n);
  for (int a = 0; a < n; ++a) {
    auto [ax, ay] = pts[a];
    g.elems.push_back("(" + std::to_string(ax) + "," + std::to_string(ay) + ")");
    g.inv[a] = index[{-ax, -ay}];
    g.length[a] = Rat(std::llabs(ax) + std::llabs(ay));
    for (int b = 0; b < n; ++b) {
      auto [bx, by] = pts[b];
      auto it = index.find({ax + bx, ay + by});
      if (it != index.end()) g.mult[a][b] = it->second;
    }
  }
  return g;
}

}  // namespace coarsedim
