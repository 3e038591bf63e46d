#include "gql/quasilocality.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <unordered_set>

#include "gql/error.hpp"
#include "gql/parallel.hpp"

namespace gql {

namespace {

using Mask = std::uint32_t;
// Subset tables are 2^m entries; beyond this the bracket is used whatever exact_limit says.
constexpr int kMaxExact = 24;

std::size_t sz(int v) { return static_cast<std::size_t>(v); }

std::vector<std::vector<int>> fibre_distances(const Filtration& filt, int slot) {
  const Groupoid& g = *filt.groupoid();
  const auto& m = g.fibre_of_slot(slot).members;
  std::vector<std::vector<int>> d(m.size(), std::vector<int>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) d[i][j] = filt.level_of(g.compose(m[i], g.inv(m[j])));
  return d;
}

std::vector<int> bits(Mask mask) {
  std::vector<int> out;
  for (int i = 0; mask; ++i, mask >>= 1)
    if (mask & 1u) out.push_back(i);
  return out;
}

double frobenius_sq(const Eigen::MatrixXd& abs2, Mask rows, Mask cols) {
  double acc = 0.0;
  for (int i : bits(rows))
    for (int j : bits(cols)) acc += abs2(i, j);
  return acc;
}

// far[a] = {b : d(a,b) > n}.
std::vector<Mask> far_masks(const std::vector<std::vector<int>>& d, int n) {
  std::vector<Mask> far(d.size(), 0);
  for (std::size_t a = 0; a < d.size(); ++a)
    for (std::size_t b = 0; b < d.size(); ++b)
      if (d[a][b] > n) far[a] |= Mask{1} << b;
  return far;
}

// common[B] = intersection of far[b] over b in B; common[0] = everything.
std::vector<Mask> common_far(const std::vector<Mask>& far) {
  const std::size_t m = far.size();
  const Mask full = m == 32 ? ~Mask{0} : (Mask{1} << m) - 1;
  std::vector<Mask> common(std::size_t{1} << m);
  common[0] = full;
  for (std::size_t b = 1; b < common.size(); ++b) {
    const int low = std::countr_zero(static_cast<Mask>(b));
    common[b] = common[b & (b - 1)] & far[sz(low)];
  }
  return common;
}

ProfileEntry exact_block_sup(const Eigen::MatrixXcd& t, const std::vector<Mask>& far) {
  const auto common = common_far(far);
  // Norms grow with A and B, so only pairs closed under B -> far(B) -> far(far(B)) matter.
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::pair<Mask, Mask>> pairs;
  for (std::size_t b = 1; b < common.size(); ++b) {
    const Mask a = common[b];
    if (a == 0) continue;
    const Mask closed = common[a];
    const std::uint64_t key = (std::uint64_t{a} << 32) | closed;
    if (seen.insert(key).second) pairs.emplace_back(a, closed);
  }
  const Eigen::MatrixXd abs2 = t.cwiseAbs2();
  std::vector<std::pair<double, std::size_t>> order;
  order.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) order.emplace_back(frobenius_sq(abs2, pairs[i].first, pairs[i].second), i);
  std::sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
    return x.first != y.first ? x.first > y.first : x.second < y.second;
  });
  // The Frobenius norm dominates the spectral norm: stop once it cannot beat the best.
  double best = 0.0;
  for (const auto& [frob, i] : order) {
    if (std::sqrt(frob) <= best) break;
    const auto rows = bits(pairs[i].first), cols = bits(pairs[i].second);
    best = std::max(best, block_norm(t, rows, cols));
  }
  return {best, best, ProfileMethod::Exact};
}

ProfileEntry bracket_block_sup(const Eigen::MatrixXcd& t, const std::vector<std::vector<int>>& d, int n) {
  const auto m = static_cast<int>(d.size());
  Eigen::MatrixXcd masked = t;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (d[sz(a)][sz(b)] <= n) masked(a, b) = 0.0;
  const double upper = spectral_norm(masked);
  if (upper == 0.0) return {0.0, 0.0, ProfileMethod::Bracketed};

  const Eigen::MatrixXd abs2 = masked.cwiseAbs2();
  auto far_of = [&](const std::vector<int>& set, int c) {
    return std::all_of(set.begin(), set.end(), [&](int s) { return d[sz(s)][sz(c)] > n; });
  };
  auto close = [&](const std::vector<int>& from) {
    std::vector<int> out;
    for (int c = 0; c < m; ++c)
      if (far_of(from, c)) out.push_back(c);
    return out;
  };
  auto frob = [&](const std::vector<int>& rows, const std::vector<int>& cols) {
    double acc = 0.0;
    for (int i : rows)
      for (int j : cols) acc += abs2(i, j);
    return acc;
  };
  // Seeds: closures of single columns, ranked by Frobenius mass.
  std::vector<std::pair<double, int>> seeds;
  for (int b = 0; b < m; ++b) {
    const auto rows = close({b});
    seeds.emplace_back(frob(rows, close(rows)), b);
  }
  std::sort(seeds.begin(), seeds.end(), [](const auto& x, const auto& y) {
    return x.first != y.first ? x.first > y.first : x.second < y.second;
  });
  double lower = 0.0;
  const std::size_t n_seeds = std::min<std::size_t>(3, seeds.size());
  for (std::size_t s = 0; s < n_seeds; ++s) {
    std::vector<int> cols{seeds[s].second};
    std::vector<int> rows = close(cols);
    cols = close(rows);
    double mass = frob(rows, cols);
    // Add moves on the column side, scored by Frobenius mass; rows shrink to stay admissible.
    for (bool improved = true; improved;) {
      improved = false;
      int best_c = -1;
      double best_mass = mass;
      for (int c = 0; c < m; ++c) {
        if (std::find(cols.begin(), cols.end(), c) != cols.end()) continue;
        std::vector<int> r2;
        for (int r : rows)
          if (d[sz(r)][sz(c)] > n) r2.push_back(r);
        auto c2 = cols;
        c2.push_back(c);
        const double m2 = frob(r2, c2);
        if (m2 > best_mass + 1e-15) {
          best_mass = m2;
          best_c = c;
        }
      }
      if (best_c >= 0) {
        cols.push_back(best_c);
        std::sort(cols.begin(), cols.end());
        rows = close(cols);
        cols = close(rows);
        mass = frob(rows, cols);
        improved = true;
      }
    }
    lower = std::max(lower, block_norm(t, rows, cols));
  }
  return {std::min(lower, upper), upper, ProfileMethod::Bracketed};
}

ProfileEntry exact_vector_sup(const Eigen::MatrixXcd& t, const Eigen::VectorXcd& xi, const std::vector<Mask>& far) {
  const auto common = common_far(far);
  const auto m = static_cast<int>(far.size());
  // Gray-code walk over B keeps T χ_B ξ up to date with one column update per step.
  // Near entries never reach a row of A, so they are dropped to keep zeros exact.
  Eigen::MatrixXcd tf = Eigen::MatrixXcd::Zero(m, m);
  for (int j = 0; j < m; ++j)
    for (int i : bits(far[sz(j)])) tf(i, j) = t(i, j);
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(m);
  Mask b = 0;
  double best = 0.0;
  const std::size_t total = std::size_t{1} << m;
  for (std::size_t step = 1; step < total; ++step) {
    const int flip = std::countr_zero(static_cast<Mask>(step));
    const Mask bit = Mask{1} << flip;
    if (b & bit) {
      y -= tf.col(flip) * xi[flip];
    } else {
      y += tf.col(flip) * xi[flip];
    }
    b ^= bit;
    const Mask a = common[b];
    double acc = 0.0;
    for (int i : bits(a)) acc += std::norm(y[i]);
    best = std::max(best, std::sqrt(acc));
  }
  return {best, best, ProfileMethod::Exact};
}

ProfileEntry bracket_vector_sup(const Eigen::MatrixXcd& t, const Eigen::VectorXcd& xi,
                                const std::vector<std::vector<int>>& d, int n) {
  const auto m = static_cast<int>(d.size());
  Eigen::MatrixXcd masked = t;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (d[sz(a)][sz(b)] <= n) masked(a, b) = 0.0;
  const Eigen::VectorXd row_bound = masked.cwiseAbs() * xi.cwiseAbs();
  const double upper = std::min(spectral_norm(masked) * xi.norm(), row_bound.norm());
  if (upper == 0.0) return {0.0, 0.0, ProfileMethod::Bracketed};

  // Greedy growth of B; A is always the full set of rows far from B.
  std::vector<bool> in_b(sz(m), false), in_a(sz(m), true);
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(m);
  double lower = 0.0;
  for (int step = 0; step < m; ++step) {
    int best_c = -1;
    double best_val = lower;
    for (int c = 0; c < m; ++c) {
      if (in_b[sz(c)]) continue;
      double acc = 0.0;
      for (int r = 0; r < m; ++r)
        if (in_a[sz(r)] && d[sz(r)][sz(c)] > n) acc += std::norm(y[r] + t(r, c) * xi[c]);
      const double val = std::sqrt(acc);
      if (val > best_val + 1e-15) {
        best_val = val;
        best_c = c;
      }
    }
    if (best_c < 0) break;
    in_b[sz(best_c)] = true;
    y += t.col(best_c) * xi[best_c];
    for (int r = 0; r < m; ++r)
      if (d[sz(r)][sz(best_c)] <= n) in_a[sz(r)] = false;
    lower = best_val;
  }
  return {std::min(lower, upper), upper, ProfileMethod::Bracketed};
}

PropagationProfile combine(std::vector<std::vector<ProfileEntry>> per_fibre, int depth) {
  PropagationProfile out;
  out.levels.assign(sz(depth) + 1, ProfileEntry{});
  for (const auto& fibre : per_fibre) {
    for (int n = 0; n <= depth; ++n) {
      auto& e = out.levels[sz(n)];
      const auto& f = fibre[sz(n)];
      e.lower = std::max(e.lower, f.lower);
      e.upper = std::max(e.upper, f.upper);
      if (f.method == ProfileMethod::Bracketed) e.method = ProfileMethod::Bracketed;
    }
  }
  // The true profile is non-increasing in n, so both brackets may be tightened.
  for (int n = 1; n <= depth; ++n) {
    out.levels[sz(n)].upper = std::min(out.levels[sz(n)].upper, out.levels[sz(n - 1)].upper);
  }
  for (int n = depth - 1; n >= 0; --n) {
    out.levels[sz(n)].lower = std::max(out.levels[sz(n)].lower, out.levels[sz(n + 1)].lower);
  }
  for (auto& e : out.levels) e.lower = std::min(e.lower, e.upper);
  return out;
}

}  // namespace

std::string_view to_string(ProfileMethod m) { return m == ProfileMethod::Exact ? "exact" : "bracketed"; }

double block_norm(const Eigen::MatrixXcd& t, std::span<const int> rows, std::span<const int> cols) {
  if (rows.empty() || cols.empty()) return 0.0;
  Eigen::MatrixXcd sub(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = t(rows[i], cols[j]);
  return spectral_norm(sub);
}

bool is_K_separated(const ModuleVector& f, const ModuleVector& g, std::span<const Elem> k) {
  require_same(f.groupoid, g.groupoid, "is_K_separated");
  const Groupoid& G = *f.groupoid;
  std::vector<bool> in_k(sz(G.size()), false);
  for (Elem e : k) in_k[sz(e)] = true;
  for (Elem a = 0; a < G.size(); ++a) {
    if (std::abs(f.values[a]) <= kEntryTol) continue;
    for (Elem b : G.fibre_of_slot(G.unit_slot(G.src(a))).members) {
      if (std::abs(g.values[b]) <= kEntryTol) continue;
      if (in_k[sz(G.compose(b, G.inv(a)))] || in_k[sz(G.compose(a, G.inv(b)))]) return false;
    }
  }
  return true;
}

int support_level(const FibreOperatorFamily& t, const Filtration& filt) {
  require_same(t.groupoid, filt.groupoid(), "support_level");
  check_shape(t);
  const Groupoid& G = *t.groupoid;
  int level = 0;
  for (int k = 0; k < G.unit_count(); ++k) {
    const auto& m = G.fibre_of_slot(k).members;
    const auto& b = t.blocks[sz(k)];
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m.size(); ++j)
        if (std::abs(b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) > kEntryTol) {
          level = std::max(level, filt.level_of(G.compose(m[i], G.inv(m[j]))));
        }
  }
  return level;
}

int function_support_level(const ModuleVector& f, const Filtration& filt) {
  require_same(f.groupoid, filt.groupoid(), "function_support_level");
  int level = 0;
  for (Elem e = 0; e < f.groupoid->size(); ++e)
    if (std::abs(f.values[e]) > kEntryTol) level = std::max(level, filt.level_of(e));
  return level;
}

PropagationProfile propagation_profile(const FibreOperatorFamily& t, const Filtration& filt, int exact_limit) {
  require_same(t.groupoid, filt.groupoid(), "propagation_profile");
  check_shape(t);
  if (exact_limit < 1) throw Error(ErrorKind::InvalidConfig, "exact_limit must be at least 1");
  const Groupoid& G = *t.groupoid;
  const int depth = filt.depth();
  std::vector<std::vector<ProfileEntry>> per_fibre(sz(G.unit_count()));
  parallel_for(per_fibre.size(), [&](std::size_t k) {
    const auto d = fibre_distances(filt, static_cast<int>(k));
    const auto m = static_cast<int>(d.size());
    const bool exact = m <= std::min(exact_limit, kMaxExact);
    auto& out = per_fibre[k];
    out.resize(sz(depth) + 1);
    for (int n = 0; n <= depth; ++n) {
      out[sz(n)] = exact ? exact_block_sup(t.blocks[k], far_masks(d, n)) : bracket_block_sup(t.blocks[k], d, n);
    }
  });
  return combine(std::move(per_fibre), depth);
}

PropagationProfile vector_ql_profile(const FibreOperatorFamily& t, const ModuleVector& xi, const Filtration& filt,
                                     int exact_limit) {
  require_same(t.groupoid, filt.groupoid(), "vector_ql_profile");
  require_same(t.groupoid, xi.groupoid, "vector_ql_profile");
  check_shape(t);
  if (exact_limit < 1) throw Error(ErrorKind::InvalidConfig, "exact_limit must be at least 1");
  const Groupoid& G = *t.groupoid;
  const int depth = filt.depth();
  std::vector<std::vector<ProfileEntry>> per_fibre(sz(G.unit_count()));
  parallel_for(per_fibre.size(), [&](std::size_t k) {
    const auto d = fibre_distances(filt, static_cast<int>(k));
    const auto m = static_cast<int>(d.size());
    const bool exact = m <= std::min(exact_limit, kMaxExact);
    const Eigen::VectorXcd v = xi.restrict_to(static_cast<int>(k));
    auto& out = per_fibre[k];
    out.resize(sz(depth) + 1);
    for (int n = 0; n <= depth; ++n) {
      out[sz(n)] = exact ? exact_vector_sup(t.blocks[k], v, far_masks(d, n)) : bracket_vector_sup(t.blocks[k], v, d, n);
    }
  });
  return combine(std::move(per_fibre), depth);
}

FibreMetric fibre_metric(const Filtration& filt, Elem x) {
  const Groupoid& G = *filt.groupoid();
  const Fibre& f = source_fibre(G, x);
  return {x, f.members, fibre_distances(filt, G.unit_slot(x))};
}

GeometryStats geometry_stats(const Filtration& filt) {
  const Groupoid& G = *filt.groupoid();
  const int depth = filt.depth();
  GeometryStats s{std::vector<int>(sz(depth) + 1, 0), std::vector<int>(sz(depth) + 1, 0)};
  for (int k = 0; k < G.unit_count(); ++k) {
    const auto d = fibre_distances(filt, k);
    for (const auto& row : d)
      for (int n = 0; n <= depth; ++n) {
        const auto ball = static_cast<int>(std::count_if(row.begin(), row.end(), [n](int v) { return v <= n; }));
        s.max_ball[sz(n)] = std::max(s.max_ball[sz(n)], ball);
      }
  }
  for (Elem y : G.units()) {
    for (int n = 0; n <= depth; ++n) {
      int count = 0;
      for (Elem e = 0; e < G.size(); ++e)
        if (G.rng(e) == y && filt.level_of(e) <= n) ++count;
      s.range_bound[sz(n)] = std::max(s.range_bound[sz(n)], count);
    }
  }
  return s;
}

double variation_of(const ModuleVector& h, const Filtration& filt, int n) {
  require_same(h.groupoid, filt.groupoid(), "variation_of");
  const Groupoid& G = *h.groupoid;
  double best = 0.0;
  for (int k = 0; k < G.unit_count(); ++k) {
    const auto& m = G.fibre_of_slot(k).members;
    for (Elem a : m)
      for (Elem b : m)
        if (filt.level_of(G.compose(a, G.inv(b))) <= n) best = std::max(best, std::abs(h.values[a] - h.values[b]));
  }
  return best;
}

ModuleVector step_function(const ModuleVector& f, const Filtration& filt, int n) {
  require_same(f.groupoid, filt.groupoid(), "step_function");
  if (n < 1) throw Error(ErrorKind::InvalidConfig, "step function needs n >= 1");
  const Groupoid& G = *f.groupoid;
  ModuleVector h = ModuleVector::zeros(f.groupoid);
  for (int k = 0; k < G.unit_count(); ++k) {
    const auto& m = G.fibre_of_slot(k).members;
    const auto d = fibre_distances(filt, k);
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j < m.size(); ++j)
      if (std::abs(f.values[m[j]]) > kEntryTol) support.push_back(j);
    if (support.empty()) continue;
    for (std::size_t i = 0; i < m.size(); ++i) {
      int dist = n;
      for (std::size_t j : support) dist = std::min(dist, d[i][j]);
      h.values[m[i]] = static_cast<double>(n - dist) / n;
    }
  }
  return h;
}

double commutator_defect(const FibreOperatorFamily& t, const ModuleVector& h) {
  const auto mh = multiplication_operator(h);
  return operator_norm(t * mh - mh * t);
}

}  // namespace gql
