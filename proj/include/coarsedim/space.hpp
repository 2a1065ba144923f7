#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "coarsedim/group.hpp"
#include "coarsedim/rational.hpp"

namespace coarsedim {

struct GenOptions {
  int point_cap = 4096;
};

/// A finite metric space: named points plus an exact rational distance
/// matrix. The three metric axioms are validated at construction.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace(std::vector<std::string> points,
                    std::vector<std::vector<Rat>> dist);

  int size() const { return static_cast<int>(points_.size()); }
  const std::vector<std::string>& points() const { return points_; }
  const Rat& dist(int i, int j) const { return dist_[i][j]; }
  const std::vector<std::vector<Rat>>& matrix() const { return dist_; }

  Rat diameter() const;
  Rat set_diameter(const std::vector<int>& s) const;
  /// min over cross pairs; undefined (throws) for an empty side.
  Rat set_distance(const std::vector<int>& a, const std::vector<int>& b) const;
  Rat point_set_distance(int x, const std::vector<int>& s) const;
  /// Closed ball {y : d(x,y) <= r}.
  std::vector<int> ball(int x, const Rat& r) const;
  /// Sorted distinct realized distance values (always contains 0).
  std::vector<Rat> distance_values() const;

  /// Hash of the point names and matrix; used to detect when two entourages
  /// were built over different spaces.
  std::uint64_t fingerprint() const { return fingerprint_; }

 private:
  std::vector<std::string> points_;
  std::vector<std::vector<Rat>> dist_;
  std::uint64_t fingerprint_ = 0;
};

FiniteMetricSpace gen_path(int n);
FiniteMetricSpace gen_cycle(int n);
FiniteMetricSpace gen_grid(const std::vector<int>& dims,
                           const GenOptions& opts = {});
/// Points of the weighted direct sum with d(a,b) = sum_n f(n)|a_n - b_n|,
/// truncated to the ball of the given radius around 0. Weights must be
/// strictly increasing positive integers.
FiniteMetricSpace gen_dirsum(const std::vector<long long>& weights,
                             long long radius, const GenOptions& opts = {});
/// Ball of the given radius in a group's word metric. All pairwise products
/// a^{-1}b must be defined; for partial groups use a ball of at least twice
/// the requested radius.
FiniteMetricSpace gen_cayley_ball(const Group& g, const Rat& radius,
                                  const GenOptions& opts = {});

/// A set of ordered point pairs over one space.
class Entourage {
 public:
  Entourage(const FiniteMetricSpace& space,
            std::vector<std::pair<int, int>> pairs);

  /// The tube {(x,y) : d(x,y) <= R} (closed) or {d < R} (open).
  static Entourage tube(const FiniteMetricSpace& space, const Rat& R,
                        bool closed = true);
  static Entourage diagonal(const FiniteMetricSpace& space);

  int space_size() const { return n_; }
  std::uint64_t space_fingerprint() const { return space_fp_; }
  bool contains(int x, int y) const;
  std::size_t pair_count() const;
  std::vector<std::pair<int, int>> pairs() const;
  const std::vector<std::vector<int>>& successors() const { return succ_; }

  bool subset_of(const Entourage& other) const;
  bool operator==(const Entourage& other) const;

 private:
  Entourage(int n, std::uint64_t fp) : n_(n), space_fp_(fp), succ_(n) {}
  int n_;
  std::uint64_t space_fp_;
  std::vector<std::vector<int>> succ_;  // succ_[x] = sorted y with (x,y) in E

  friend Entourage entourage_compose(const Entourage&, const Entourage&);
  friend Entourage entourage_invert(const Entourage&);
};

/// Relational composition {(x,y) : exists z, (x,z) in E and (z,y) in F}.
/// Throws on mismatched underlying spaces.
Entourage entourage_compose(const Entourage& E, const Entourage& F);
Entourage entourage_invert(const Entourage& E);

}  // namespace coarsedim
