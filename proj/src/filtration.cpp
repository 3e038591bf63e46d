#include "gql/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gql/error.hpp"

namespace gql {

namespace {
constexpr int kAbsent = std::numeric_limits<int>::max();
}

Filtration Filtration::from_levels(GroupoidPtr g, const std::vector<std::vector<Elem>>& levels) {
  if (!g) throw Error(ErrorKind::InvalidFiltration, "no groupoid");
  if (levels.empty()) throw Error(ErrorKind::InvalidFiltration, "no levels");
  const auto n = static_cast<std::size_t>(g->size());
  const int depth = static_cast<int>(levels.size()) - 1;
  std::vector<int> level(n, kAbsent);
  std::vector<bool> prev(n, false);
  for (int k = 0; k <= depth; ++k) {
    std::vector<bool> cur(n, false);
    for (Elem e : levels[static_cast<std::size_t>(k)]) {
      if (e < 0 || static_cast<std::size_t>(e) >= n) {
        throw Error(ErrorKind::InvalidFiltration, "level " + std::to_string(k) + " has an element out of range");
      }
      cur[static_cast<std::size_t>(e)] = true;
    }
    for (std::size_t e = 0; e < n; ++e) {
      if (prev[e] && !cur[e]) {
        throw Error(ErrorKind::InvalidFiltration, "levels are not nested: '" + g->name(static_cast<Elem>(e)) +
                                                      "' is in K_" + std::to_string(k - 1) + " but not in K_" +
                                                      std::to_string(k));
      }
    }
    for (std::size_t e = 0; e < n; ++e) {
      if (cur[e] && level[e] == kAbsent) level[e] = k;
      if (cur[e] && !cur[static_cast<std::size_t>(g->inv(static_cast<Elem>(e)))]) {
        throw Error(ErrorKind::NotSymmetric, "K_" + std::to_string(k) + " contains '" + g->name(static_cast<Elem>(e)) +
                                                 "' but not its inverse");
      }
    }
    if (k == 0) {
      for (std::size_t e = 0; e < n; ++e) {
        if (cur[e] != g->is_unit(static_cast<Elem>(e))) {
          throw Error(ErrorKind::InvalidFiltration, "K_0 must equal the unit space");
        }
      }
    }
    prev = std::move(cur);
  }
  for (std::size_t e = 0; e < n; ++e) {
    if (level[e] == kAbsent) {
      throw Error(ErrorKind::InvalidFiltration, "K_N misses '" + g->name(static_cast<Elem>(e)) + "'");
    }
  }
  for (Elem a = 0; a < g->size(); ++a) {
    for (Elem b = 0; b < g->size(); ++b) {
      const Elem c = g->compose(a, b);
      if (c == kUndefined) continue;
      const int bound = level[static_cast<std::size_t>(a)] + level[static_cast<std::size_t>(b)];
      if (bound <= depth && level[static_cast<std::size_t>(c)] > bound) {
        throw Error(ErrorKind::InvalidFiltration, "K_n K_m is not contained in K_{n+m}: '" + g->name(a) + "' * '" +
                                                      g->name(b) + "' = '" + g->name(c) + "'");
      }
    }
  }
  return Filtration(std::move(g), std::move(level), depth);
}

std::vector<Elem> Filtration::level(int n) const {
  std::vector<Elem> out;
  for (Elem e = 0; e < g_->size(); ++e)
    if (level_of(e) <= n) out.push_back(e);
  return out;
}

std::vector<std::size_t> Filtration::cardinalities() const {
  std::vector<std::size_t> out(static_cast<std::size_t>(depth_) + 1, 0);
  for (int l : level_) ++out[static_cast<std::size_t>(l)];
  for (std::size_t k = 1; k < out.size(); ++k) out[k] += out[k - 1];
  return out;
}

Filtration build_filtration(GroupoidPtr g, std::span<const Elem> gen, int depth) {
  if (!g) throw Error(ErrorKind::InvalidFiltration, "no groupoid");
  if (depth < 0) throw Error(ErrorKind::InvalidFiltration, "negative depth");
  if (!is_symmetric(*g, gen)) throw Error(ErrorKind::NotSymmetric, "generating set is not closed under inverses");
  std::vector<Elem> step = g->units();
  step.insert(step.end(), gen.begin(), gen.end());
  std::sort(step.begin(), step.end());
  step.erase(std::unique(step.begin(), step.end()), step.end());

  std::vector<std::vector<Elem>> levels{g->units()};
  std::vector<Elem> cur = g->units();
  for (int k = 1; k <= depth; ++k) {
    cur = product_set(*g, cur, step);
    levels.push_back(cur);
  }
  if (static_cast<int>(cur.size()) != g->size()) {
    throw Error(ErrorKind::NotGenerating, "K_" + std::to_string(depth) + " has " + std::to_string(cur.size()) +
                                              " of " + std::to_string(g->size()) + " elements");
  }
  return Filtration::from_levels(std::move(g), levels);
}

Filtration metric_filtration(std::span<const std::string> points, const std::vector<std::vector<double>>& dist,
                             double scale, int depth) {
  const std::size_t m = points.size();
  if (m == 0) throw Error(ErrorKind::EmptySet, "no points");
  if (!(scale > 0)) throw Error(ErrorKind::InvalidFiltration, "scale must be positive");
  if (depth < 0) throw Error(ErrorKind::InvalidFiltration, "negative depth");
  if (dist.size() != m) throw Error(ErrorKind::NotAMetric, "distance table has the wrong number of rows");
  double diam = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (dist[i].size() != m) throw Error(ErrorKind::NotAMetric, "distance row has the wrong length");
    for (std::size_t j = 0; j < m; ++j) {
      const double d = dist[i][j];
      if (!std::isfinite(d) || d < 0) throw Error(ErrorKind::NotAMetric, "distances must be finite and non-negative");
      if ((d == 0) != (i == j)) {
        throw Error(ErrorKind::NotAMetric, "d('" + points[i] + "', '" + points[j] + "') violates d(x,y)=0 iff x=y");
      }
      diam = std::max(diam, d);
    }
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (dist[i][j] != dist[j][i]) throw Error(ErrorKind::NotAMetric, "distance table is not symmetric");
      for (std::size_t k = 0; k < m; ++k)
        if (dist[i][k] > dist[i][j] + dist[j][k] + 1e-12 * diam) {
          throw Error(ErrorKind::NotAMetric, "triangle inequality fails at ('" + points[i] + "', '" + points[j] +
                                                 "', '" + points[k] + "')");
        }
    }
  if (scale * depth < diam) {
    throw Error(ErrorKind::DepthTooSmall, "scale * depth = " + std::to_string(scale * depth) +
                                              " is below the diameter " + std::to_string(diam));
  }
  GroupoidPtr g = pair_groupoid(points);
  std::vector<std::vector<Elem>> levels(static_cast<std::size_t>(depth) + 1);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const Elem e = g->index_of(pair_id(points[i], points[j]));
      const int first = static_cast<int>(std::ceil(dist[i][j] / scale - 1e-12));
      for (int k = std::max(first, 0); k <= depth; ++k) levels[static_cast<std::size_t>(k)].push_back(e);
    }
  for (auto& l : levels) std::sort(l.begin(), l.end());
  return Filtration::from_levels(std::move(g), levels);
}

}  // namespace gql
