#include "gql/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gql/error.hpp"

namespace gql {

namespace {

std::size_t sz(int v) { return static_cast<std::size_t>(v); }

Complex normal_complex(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

// Generators (x, g) for g in gens, all x.
Filtration transformation_filtration(const GroupoidPtr& g, const std::vector<std::string>& space,
                                     const std::vector<std::string>& gens, int depth) {
  std::vector<Elem> gen;
  for (const auto& x : space)
    for (const auto& s : gens) gen.push_back(g->index_of(pair_id(x, s)));
  std::sort(gen.begin(), gen.end());
  return build_filtration(g, gen, depth);
}

}  // namespace

GroupTable cyclic_group(int m) {
  if (m < 1) throw Error(ErrorKind::NotAGroup, "cyclic group needs m >= 1");
  GroupTable t;
  for (int i = 0; i < m; ++i) t.elements.push_back(std::to_string(i));
  for (int i = 0; i < m; ++i) {
    std::vector<std::string> row;
    for (int j = 0; j < m; ++j) row.push_back(std::to_string((i + j) % m));
    t.table.push_back(std::move(row));
  }
  return t;
}

GroupTable symmetric_group_s3() {
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  auto name = [](const std::array<int, 3>& q) {
    return std::to_string(q[0] + 1) + std::to_string(q[1] + 1) + std::to_string(q[2] + 1);
  };
  GroupTable t;
  for (const auto& q : perms) t.elements.push_back(name(q));
  // (a * b)(i) = a(b(i)).
  for (const auto& a : perms) {
    std::vector<std::string> row;
    for (const auto& b : perms) row.push_back(name({a[sz(b[0])], a[sz(b[1])], a[sz(b[2])]}));
    t.table.push_back(std::move(row));
  }
  return t;
}

std::vector<std::string> path_points(int m) {
  const int width = m <= 10 ? 1 : static_cast<int>(std::to_string(m - 1).size());
  std::vector<std::string> out;
  for (int i = 0; i < m; ++i) {
    std::string s = std::to_string(i);
    out.push_back(std::string(sz(std::max(0, width - static_cast<int>(s.size()))), '0') + s);
  }
  return out;
}

std::vector<std::vector<double>> path_distances(int m) {
  std::vector<std::vector<double>> d(sz(m), std::vector<double>(sz(m)));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) d[sz(i)][sz(j)] = std::abs(i - j);
  return d;
}

CorpusEntry cyclic_entry(int m) {
  auto g = group_groupoid(cyclic_group(m));
  std::vector<Elem> gen;
  if (m > 1) {
    gen.push_back(g->index_of("1"));
    gen.push_back(g->index_of(std::to_string(m - 1)));
  }
  std::sort(gen.begin(), gen.end());
  gen.erase(std::unique(gen.begin(), gen.end()), gen.end());
  return {"Z" + std::to_string(m), build_filtration(g, gen, std::max(1, m / 2)), {}};
}

CorpusEntry s3_entry() {
  auto g = group_groupoid(symmetric_group_s3());
  // Transpositions generate S3 within three products.
  const std::vector<Elem> gen{g->index_of("132"), g->index_of("213"), g->index_of("321")};
  return {"S3", build_filtration(g, gen, 3), {}};
}

CorpusEntry path_entry(int m) {
  auto pts = path_points(m);
  return {"path" + std::to_string(m), metric_filtration(pts, path_distances(m), 1.0, std::max(1, m - 1)), pts};
}

CorpusEntry swap_entry() {
  const std::vector<std::string> space{"p", "q"};
  auto g = transformation_groupoid(space, cyclic_group(2), {{"p", "q"}, {"q", "p"}});
  return {"swap", transformation_filtration(g, space, {"1"}, 1), {}};
}

CorpusEntry rotation_entry(int m) {
  std::vector<std::string> space;
  for (int i = 0; i < m; ++i) space.push_back("x" + std::to_string(i));
  std::vector<std::vector<std::string>> action;
  for (int k = 0; k < m; ++k) {
    std::vector<std::string> row;
    for (int i = 0; i < m; ++i) row.push_back(space[sz((i + k) % m)]);
    action.push_back(std::move(row));
  }
  auto g = transformation_groupoid(space, cyclic_group(m), action);
  std::vector<std::string> gens{"1"};
  if (m > 2) gens.push_back(std::to_string(m - 1));
  return {"rotation" + std::to_string(m), transformation_filtration(g, space, gens, std::max(1, m / 2)), {}};
}

CorpusEntry reflection_entry() {
  const std::vector<std::string> space{"a", "b", "c"};
  auto g = transformation_groupoid(space, cyclic_group(2), {{"a", "b", "c"}, {"b", "a", "c"}});
  return {"reflection", transformation_filtration(g, space, {"1"}, 1), {}};
}

std::vector<CorpusEntry> standard_corpus() {
  std::vector<CorpusEntry> out;
  out.push_back(cyclic_entry(2));
  out.push_back(cyclic_entry(4));
  out.push_back(s3_entry());
  for (int m : {2, 3, 5, 8}) out.push_back(path_entry(m));
  out.push_back(swap_entry());
  out.push_back(rotation_entry(3));
  out.push_back(rotation_entry(4));
  out.push_back(reflection_entry());
  return out;
}

ModuleVector random_function(const GroupoidPtr& g, Rng& rng) {
  ModuleVector f = ModuleVector::zeros(g);
  for (Elem e = 0; e < g->size(); ++e) f.values[e] = normal_complex(rng);
  return f;
}

ModuleVector random_banded_function(const Filtration& filt, int level, Rng& rng) {
  ModuleVector f = random_function(filt.groupoid(), rng);
  for (Elem e = 0; e < f.groupoid->size(); ++e)
    if (filt.level_of(e) > level) f.values[e] = 0.0;
  return f;
}

FibreOperatorFamily random_family(const GroupoidPtr& g, Rng& rng) {
  FibreOperatorFamily t = FibreOperatorFamily::zeros(g);
  for (auto& b : t.blocks)
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      for (Eigen::Index i = 0; i < b.rows(); ++i) b(i, j) = normal_complex(rng);
  return t;
}

FibreOperatorFamily random_banded_family(const Filtration& filt, int band, Rng& rng) {
  const Groupoid& g = *filt.groupoid();
  FibreOperatorFamily t = random_family(filt.groupoid(), rng);
  for (int k = 0; k < g.unit_count(); ++k) {
    const auto& m = g.fibre_of_slot(k).members;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m.size(); ++j)
        if (filt.level_of(g.compose(m[i], g.inv(m[j]))) > band) {
          t.blocks[sz(k)](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 0.0;
        }
  }
  return t;
}

FibreOperatorFamily random_equivariant(const GroupoidPtr& g, Rng& rng) { return lambda(random_function(g, rng)); }

KernelFamily random_psd_kernel(const GroupoidPtr& g, Rng& rng) {
  KernelFamily k{g, {}};
  for (const auto& f : g->fibres()) {
    const auto n = static_cast<Eigen::Index>(f.size());
    const Eigen::Index dim = std::max<Eigen::Index>(1, n / 2 + 1);
    Eigen::MatrixXcd v(dim, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < dim; ++i) v(i, j) = normal_complex(rng);
      v.col(j).normalize();
    }
    k.blocks.push_back(v.adjoint() * v);
  }
  return k;
}

ModuleVector random_density(const GroupoidPtr& g, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ModuleVector d = ModuleVector::zeros(g);
  for (Elem e = 0; e < g->size(); ++e) d.values[e] = u(rng) < 0.3 ? 0.0 : u(rng);
  for (int k = 0; k < g->unit_count(); ++k) {
    const double mass = d.restrict_to(k).norm();
    const double scale = mass > 0 ? std::sqrt(u(rng)) / mass : 0.0;
    for (Elem e : g->fibre_of_slot(k).members) d.values[e] *= scale;
  }
  return d;
}

std::vector<NamedWitness> window_sweep(const CorpusEntry& path, const std::vector<int>& widths) {
  std::vector<NamedWitness> out;
  for (int w : widths) {
    out.push_back({"window" + std::to_string(w), witness_from_density(window_density(path.filt.groupoid(), path.points, w))});
  }
  out.push_back({"one", PositiveTypeFunction::certify(ModuleVector::constant(path.filt.groupoid(), 1.0))});
  return out;
}

}  // namespace gql
