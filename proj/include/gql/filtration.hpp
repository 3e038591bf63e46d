#pragma once

#include <span>
#include <string>
#include <vector>

#include "gql/groupoid.hpp"

namespace gql {

/// Nested symmetric exhaustion K_0 = units, K_n K_m in K_{n+m}, K_N = G.
/// Stored as the level of each element: the least n with e in K_n.
class Filtration {
 public:
  /// Validates nesting, K_0 = units, symmetry, submultiplicativity and K_N = G.
  /// Throws Error(InvalidFiltration) or Error(NotSymmetric).
  static Filtration from_levels(GroupoidPtr g, const std::vector<std::vector<Elem>>& levels);

  const GroupoidPtr& groupoid() const { return g_; }
  int depth() const { return depth_; }
  int level_of(Elem e) const { return level_[static_cast<std::size_t>(e)]; }
  bool contains(int n, Elem e) const { return level_of(e) <= n; }
  /// Members of K_n, ascending.
  std::vector<Elem> level(int n) const;
  std::vector<std::size_t> cardinalities() const;

 private:
  Filtration(GroupoidPtr g, std::vector<int> level, int depth)
      : g_(std::move(g)), level_(std::move(level)), depth_(depth) {}

  GroupoidPtr g_;
  std::vector<int> level_;
  int depth_ = 0;
};

/// K_n = units + gen + gen^2 + ... + gen^n. Throws NotSymmetric, NotGenerating.
Filtration build_filtration(GroupoidPtr g, std::span<const Elem> gen, int depth);

/// Pair groupoid on `points` with K_n = {(a,b) : dist(a,b) <= n * scale}.
/// Throws NotAMetric, DepthTooSmall, InvalidFiltration (scale <= 0).
Filtration metric_filtration(std::span<const std::string> points, const std::vector<std::vector<double>>& dist,
                             double scale, int depth);

}  // namespace gql
