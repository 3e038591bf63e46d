#include "gql/amenability.hpp"

#include <algorithm>
#include <cmath>

#include "gql/error.hpp"
#include "gql/parallel.hpp"
#include "gql/quasilocality.hpp"

namespace gql {

namespace {

std::size_t sz(int v) { return static_cast<std::size_t>(v); }

void require_non_negative(const ModuleVector& f, const char* what) {
  const Groupoid& G = *f.groupoid;
  for (Elem e = 0; e < G.size(); ++e) {
    const Complex v = f.values[e];
    if (std::abs(v.imag()) > kEntryTol || v.real() < -kEntryTol) {
      throw Error(ErrorKind::NegativeValues,
                  std::string(what) + " takes a value outside [0, inf) at '" + G.name(e) + "'", v.real());
    }
  }
}

}  // namespace

PositiveTypeCheck is_positive_type(const ModuleVector& h) {
  const auto gram = lambda(h);
  const auto& blocks = gram.blocks;
  PositiveTypeCheck out;
  out.per_unit.assign(blocks.size(), 0.0);
  std::vector<double> herm(blocks.size(), 0.0);
  parallel_for(blocks.size(), [&](std::size_t k) {
    herm[k] = hermitian_defect(blocks[k]);
    out.per_unit[k] = min_hermitian_eigenvalue(blocks[k]);
  });
  out.min_eigenvalue = out.per_unit.empty() ? 0.0 : *std::min_element(out.per_unit.begin(), out.per_unit.end());
  out.hermitian_defect = herm.empty() ? 0.0 : *std::max_element(herm.begin(), herm.end());
  out.positive = out.hermitian_defect <= kPsdTol && out.min_eigenvalue >= -kPsdTol;
  return out;
}

PositiveTypeFunction PositiveTypeFunction::certify(ModuleVector h) {
  auto check = is_positive_type(h);
  if (!check.positive) {
    if (check.hermitian_defect > kPsdTol) {
      throw Error(ErrorKind::NotPositiveType, "h(γ^{-1}) differs from conj h(γ)", check.hermitian_defect);
    }
    throw Error(ErrorKind::NotPositiveType, "a fibre Gram matrix has a negative eigenvalue", check.min_eigenvalue);
  }
  return PositiveTypeFunction(std::move(h), std::move(check.per_unit));
}

WitnessReport check_witness(const ModuleVector& f, const Filtration& filt, int n) {
  require_same(f.groupoid, filt.groupoid(), "check_witness");
  require_non_negative(f, "witness");
  const Groupoid& G = *f.groupoid;
  WitnessReport r;
  r.level = n;
  r.support_level = function_support_level(f, filt);
  std::vector<double> mass(sz(G.unit_count()), 0.0);
  for (int k = 0; k < G.unit_count(); ++k) {
    for (Elem b : G.fibre_of_slot(k).members) mass[sz(k)] += f.values[b].real();
    if (mass[sz(k)] > 1.0 + kEntryTol) r.unit_violations.push_back(G.units()[sz(k)]);
  }
  for (Elem gamma = 0; gamma < G.size(); ++gamma) {
    if (filt.level_of(gamma) > n) continue;
    const int slot = G.unit_slot(G.rng(gamma));
    r.mass_defect = std::max(r.mass_defect, std::abs(1.0 - mass[sz(slot)]));
    double var = 0.0;
    for (Elem b : G.fibre_of_slot(slot).members) var += std::abs(f.values[b] - f.values[G.compose(b, gamma)]);
    r.epsilon = std::max(r.epsilon, var);
  }
  return r;
}

WitnessReport check_pt_witness(const PositiveTypeFunction& pt, const Filtration& filt, int n) {
  const ModuleVector& h = pt.values();
  require_same(h.groupoid, filt.groupoid(), "check_pt_witness");
  const Groupoid& G = *h.groupoid;
  WitnessReport r;
  r.level = n;
  r.support_level = function_support_level(h, filt);
  for (Elem gamma = 0; gamma < G.size(); ++gamma) {
    if (filt.level_of(gamma) <= n) r.epsilon = std::max(r.epsilon, std::abs(1.0 - h.values[gamma]));
  }
  // Every unit lies in K_n, so a witness must take the value 1 there.
  for (Elem x : G.units()) {
    if (std::abs(h.values[x] - 1.0) > kPsdTol) r.unit_violations.push_back(x);
  }
  return r;
}

WitnessReport check_pt_witness(const ModuleVector& h, const Filtration& filt, int n) {
  return check_pt_witness(PositiveTypeFunction::certify(h), filt, n);
}

PositiveTypeFunction witness_from_density(const ModuleVector& g) {
  require_non_negative(g, "density");
  const Groupoid& G = *g.groupoid;
  for (int k = 0; k < G.unit_count(); ++k) {
    double mass = 0.0;
    for (Elem b : G.fibre_of_slot(k).members) mass += std::norm(g.values[b]);
    if (mass > 1.0 + 1e-12) {
      throw Error(ErrorKind::MassExceeded, "density has squared mass above 1 on the fibre of '" +
                                               G.name(G.units()[sz(k)]) + "'", mass);
    }
  }
  ModuleVector h = ModuleVector::zeros(g.groupoid);
  for (Elem gamma = 0; gamma < G.size(); ++gamma) {
    double acc = 0.0;
    for (Elem b : G.fibre_of_slot(G.unit_slot(G.rng(gamma))).members) {
      acc += g.values[b].real() * g.values[G.compose(b, gamma)].real();
    }
    h.values[gamma] = acc;
  }
  return PositiveTypeFunction::certify(std::move(h));
}

ModuleVector ball_density(const Filtration& filt, int m) {
  const Groupoid& G = *filt.groupoid();
  ModuleVector g = ModuleVector::zeros(filt.groupoid());
  for (int k = 0; k < G.unit_count(); ++k) {
    const auto& members = G.fibre_of_slot(k).members;
    const auto count = std::count_if(members.begin(), members.end(), [&](Elem e) { return filt.level_of(e) <= m; });
    const double v = 1.0 / std::sqrt(static_cast<double>(count));
    for (Elem e : members)
      if (filt.level_of(e) <= m) g.values[e] = v;
  }
  return g;
}

ModuleVector window_density(const GroupoidPtr& g, std::span<const std::string> points, int w) {
  const auto m = static_cast<int>(points.size());
  if (w < 1 || w > m) {
    throw Error(ErrorKind::InvalidConfig, "window width " + std::to_string(w) + " outside [1, " + std::to_string(m) + "]");
  }
  if (g->size() != m * m) throw Error(ErrorKind::DomainMismatch, "groupoid is not the pair groupoid on the given points");
  ModuleVector out = ModuleVector::zeros(g);
  const double v = 1.0 / std::sqrt(static_cast<double>(w));
  for (int j = 0; j < m; ++j) {
    const int start = std::clamp(j - w / 2, 0, m - w);
    for (int i = start; i < start + w; ++i) out.values[g->index_of(pair_id(points[sz(i)], points[sz(j)]))] = v;
  }
  return out;
}

KernelFamily kernel_from_function(const ModuleVector& h) {
  auto t = lambda(h);
  return {std::move(t.groupoid), std::move(t.blocks)};
}

KernelFamily modified_kernel(const ModuleVector& h, std::span<const Elem> k) {
  const Groupoid& G = *h.groupoid;
  std::vector<bool> in_range(sz(G.size()), false);
  for (Elem e : k) in_range[sz(G.rng(e))] = true;
  KernelFamily out{h.groupoid, std::vector<Eigen::MatrixXcd>(sz(G.unit_count()))};
  for (int s = 0; s < G.unit_count(); ++s) {
    const auto& m = G.fibre_of_slot(s).members;
    const auto n = static_cast<Eigen::Index>(m.size());
    Eigen::MatrixXcd b(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const Elem gi = m[static_cast<std::size_t>(i)], gj = m[static_cast<std::size_t>(j)];
        if (in_range[sz(G.rng(gi))] && in_range[sz(G.rng(gj))]) {
          b(i, j) = h.values[G.compose(gi, G.inv(gj))];
        } else {
          b(i, j) = i == j ? 1.0 : 0.0;
        }
      }
    out.blocks[sz(s)] = std::move(b);
  }
  return out;
}

KernelFamily modified_kernel(const ModuleVector& h, const Filtration& filt, int level) {
  require_same(h.groupoid, filt.groupoid(), "modified_kernel");
  const auto k = filt.level(level);
  return modified_kernel(h, k);
}

FibreOperatorFamily schur(const KernelFamily& k, const FibreOperatorFamily& t) {
  require_same(k.groupoid, t.groupoid, "schur");
  if (k.blocks.size() != t.blocks.size()) throw Error(ErrorKind::DimensionMismatch, "kernel and family have different unit counts");
  FibreOperatorFamily out{t.groupoid, std::vector<Eigen::MatrixXcd>(t.blocks.size())};
  for (std::size_t i = 0; i < t.blocks.size(); ++i) {
    if (k.blocks[i].rows() != t.blocks[i].rows() || k.blocks[i].cols() != t.blocks[i].cols()) {
      throw Error(ErrorKind::DimensionMismatch, "kernel block " + std::to_string(i) + " does not match the operator block");
    }
    out.blocks[i] = k.blocks[i].cwiseProduct(t.blocks[i]);
  }
  return out;
}

}  // namespace gql
