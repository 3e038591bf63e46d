#include "gql/module_ops.hpp"

#include <algorithm>
#include <cmath>

#include "gql/error.hpp"
#include "gql/parallel.hpp"

namespace gql {

namespace {

std::size_t sz(int v) { return static_cast<std::size_t>(v); }

}  // namespace

void require_same(const GroupoidPtr& a, const GroupoidPtr& b, const char* what) {
  if (!same_groupoid(a, b)) throw Error(ErrorKind::GroupoidMismatch, std::string(what) + ": operands live on different groupoids");
}

void check_shape(const FibreOperatorFamily& t) {
  const auto& g = *t.groupoid;
  if (t.blocks.size() != sz(g.unit_count())) {
    throw Error(ErrorKind::DimensionMismatch, "family has " + std::to_string(t.blocks.size()) + " blocks for " +
                                                  std::to_string(g.unit_count()) + " units");
  }
  for (int k = 0; k < g.unit_count(); ++k) {
    const auto m = static_cast<Eigen::Index>(g.fibre_of_slot(k).size());
    const auto& b = t.blocks[sz(k)];
    if (b.rows() != m || b.cols() != m) {
      throw Error(ErrorKind::DimensionMismatch, "block at unit '" + g.name(g.units()[sz(k)]) + "' is " +
                                                    std::to_string(b.rows()) + "x" + std::to_string(b.cols()) +
                                                    ", fibre has " + std::to_string(m) + " elements");
    }
  }
}

ModuleVector ModuleVector::zeros(GroupoidPtr g) {
  const auto n = g->size();
  return {std::move(g), Eigen::VectorXcd::Zero(n)};
}

ModuleVector ModuleVector::constant(GroupoidPtr g, Complex c) {
  const auto n = g->size();
  return {std::move(g), Eigen::VectorXcd::Constant(n, c)};
}

ModuleVector ModuleVector::delta(GroupoidPtr g, Elem e) {
  auto v = zeros(std::move(g));
  v.values[e] = 1.0;
  return v;
}

ModuleVector ModuleVector::units_indicator(GroupoidPtr g) {
  auto v = zeros(g);
  for (Elem u : g->units()) v.values[u] = 1.0;
  return v;
}

Eigen::VectorXcd ModuleVector::restrict_to(int slot) const {
  const auto& members = groupoid->fibre_of_slot(slot).members;
  Eigen::VectorXcd out(static_cast<Eigen::Index>(members.size()));
  for (std::size_t i = 0; i < members.size(); ++i) out[static_cast<Eigen::Index>(i)] = values[members[i]];
  return out;
}

FibreOperatorFamily FibreOperatorFamily::zeros(GroupoidPtr g) {
  FibreOperatorFamily t{g, {}};
  for (const auto& f : g->fibres()) {
    const auto m = static_cast<Eigen::Index>(f.size());
    t.blocks.push_back(Eigen::MatrixXcd::Zero(m, m));
  }
  return t;
}

FibreOperatorFamily FibreOperatorFamily::identity(GroupoidPtr g) {
  FibreOperatorFamily t{g, {}};
  for (const auto& f : g->fibres()) {
    const auto m = static_cast<Eigen::Index>(f.size());
    t.blocks.push_back(Eigen::MatrixXcd::Identity(m, m));
  }
  return t;
}

FibreOperatorFamily FibreOperatorFamily::adjoint() const {
  FibreOperatorFamily t{groupoid, {}};
  t.blocks.reserve(blocks.size());
  for (const auto& b : blocks) t.blocks.push_back(b.adjoint());
  return t;
}

namespace {

template <class Op>
FibreOperatorFamily blockwise(const FibreOperatorFamily& a, const FibreOperatorFamily& b, const char* what, Op op) {
  require_same(a.groupoid, b.groupoid, what);
  check_shape(a);
  check_shape(b);
  FibreOperatorFamily t{a.groupoid, std::vector<Eigen::MatrixXcd>(a.blocks.size())};
  for (std::size_t k = 0; k < a.blocks.size(); ++k) t.blocks[k] = op(a.blocks[k], b.blocks[k]);
  return t;
}

}  // namespace

FibreOperatorFamily operator*(const FibreOperatorFamily& a, const FibreOperatorFamily& b) {
  return blockwise(a, b, "product", [](const auto& x, const auto& y) { return Eigen::MatrixXcd(x * y); });
}

FibreOperatorFamily operator+(const FibreOperatorFamily& a, const FibreOperatorFamily& b) {
  return blockwise(a, b, "sum", [](const auto& x, const auto& y) { return Eigen::MatrixXcd(x + y); });
}

FibreOperatorFamily operator-(const FibreOperatorFamily& a, const FibreOperatorFamily& b) {
  return blockwise(a, b, "difference", [](const auto& x, const auto& y) { return Eigen::MatrixXcd(x - y); });
}

ModuleVector operator+(const ModuleVector& a, const ModuleVector& b) {
  require_same(a.groupoid, b.groupoid, "sum");
  return {a.groupoid, a.values + b.values};
}

ModuleVector operator-(const ModuleVector& a, const ModuleVector& b) {
  require_same(a.groupoid, b.groupoid, "difference");
  return {a.groupoid, a.values - b.values};
}

ModuleVector operator*(Complex c, const ModuleVector& a) { return {a.groupoid, c * a.values}; }

double module_norm(const ModuleVector& v) {
  double best = 0.0;
  for (int k = 0; k < v.groupoid->unit_count(); ++k) best = std::max(best, v.restrict_to(k).norm());
  return best;
}

double sup_norm(const ModuleVector& v) { return v.values.size() == 0 ? 0.0 : v.values.cwiseAbs().maxCoeff(); }

ModuleVector pointwise(const ModuleVector& a, const ModuleVector& b) {
  require_same(a.groupoid, b.groupoid, "pointwise product");
  return {a.groupoid, a.values.cwiseProduct(b.values)};
}

ModuleVector convolve(const ModuleVector& f, const ModuleVector& g) {
  require_same(f.groupoid, g.groupoid, "convolve");
  const Groupoid& G = *f.groupoid;
  ModuleVector out = ModuleVector::zeros(f.groupoid);
  for (Elem gamma = 0; gamma < G.size(); ++gamma) {
    Complex acc = 0.0;
    for (Elem alpha : G.fibre_of_slot(G.unit_slot(G.src(gamma))).members) {
      acc += f.values[G.compose(gamma, G.inv(alpha))] * g.values[alpha];
    }
    out.values[gamma] = acc;
  }
  return out;
}

ModuleVector star(const ModuleVector& f) {
  const Groupoid& G = *f.groupoid;
  ModuleVector out = ModuleVector::zeros(f.groupoid);
  for (Elem e = 0; e < G.size(); ++e) out.values[e] = std::conj(f.values[G.inv(e)]);
  return out;
}

std::vector<Complex> inner_product(const ModuleVector& eta, const ModuleVector& xi) {
  require_same(eta.groupoid, xi.groupoid, "inner_product");
  const Groupoid& G = *eta.groupoid;
  std::vector<Complex> out(sz(G.unit_count()));
  for (int k = 0; k < G.unit_count(); ++k) {
    Complex acc = 0.0;
    for (Elem e : G.fibre_of_slot(k).members) acc += std::conj(eta.values[e]) * xi.values[e];
    out[sz(k)] = acc;
  }
  return out;
}

FibreOperatorFamily lambda(const ModuleVector& f) {
  const Groupoid& G = *f.groupoid;
  FibreOperatorFamily t{f.groupoid, std::vector<Eigen::MatrixXcd>(sz(G.unit_count()))};
  parallel_for(sz(G.unit_count()), [&](std::size_t k) {
    const auto& m = G.fibre_of_slot(static_cast<int>(k)).members;
    const auto n = static_cast<Eigen::Index>(m.size());
    Eigen::MatrixXcd b(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) b(i, j) = f.values[G.compose(m[sz(i)], G.inv(m[sz(j)]))];
    t.blocks[k] = std::move(b);
  });
  return t;
}

std::vector<double> fibre_norms(const FibreOperatorFamily& t) {
  check_shape(t);
  std::vector<double> out(t.blocks.size());
  parallel_for(t.blocks.size(), [&](std::size_t k) { out[k] = spectral_norm(t.blocks[k]); });
  return out;
}

double operator_norm(const FibreOperatorFamily& t) {
  const auto norms = fibre_norms(t);
  return norms.empty() ? 0.0 : *std::max_element(norms.begin(), norms.end());
}

double reduced_norm(const ModuleVector& f) { return operator_norm(lambda(f)); }

ModuleVector apply(const FibreOperatorFamily& t, const ModuleVector& xi) {
  require_same(t.groupoid, xi.groupoid, "apply");
  check_shape(t);
  const Groupoid& G = *t.groupoid;
  ModuleVector out = ModuleVector::zeros(t.groupoid);
  for (int k = 0; k < G.unit_count(); ++k) {
    const Eigen::VectorXcd y = t.blocks[sz(k)] * xi.restrict_to(k);
    const auto& m = G.fibre_of_slot(k).members;
    for (std::size_t i = 0; i < m.size(); ++i) out.values[m[i]] = y[static_cast<Eigen::Index>(i)];
  }
  return out;
}

ModuleVector rho_apply(const ModuleVector& g, const ModuleVector& xi) { return convolve(xi, g); }

FibreOperatorFamily multiplication_operator(const ModuleVector& g) {
  const Groupoid& G = *g.groupoid;
  FibreOperatorFamily t{g.groupoid, {}};
  for (int k = 0; k < G.unit_count(); ++k) t.blocks.push_back(g.restrict_to(k).asDiagonal());
  return t;
}

Eigen::VectorXcd translate(const Groupoid& g, Elem gamma, const Eigen::VectorXcd& v) {
  const auto& from = g.fibre_of_slot(g.unit_slot(g.src(gamma))).members;
  const auto& to = g.fibre_of_slot(g.unit_slot(g.rng(gamma))).members;
  if (static_cast<std::size_t>(v.size()) != from.size()) {
    throw Error(ErrorKind::IndexMismatch, "vector has " + std::to_string(v.size()) + " entries, G_{s(" + g.name(gamma) +
                                              ")} has " + std::to_string(from.size()));
  }
  Eigen::VectorXcd out(static_cast<Eigen::Index>(to.size()));
  for (std::size_t i = 0; i < to.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[g.fibre_position(g.compose(to[i], gamma))];
  return out;
}

Eigen::MatrixXd translation_matrix(const Groupoid& g, Elem gamma) {
  const auto& to = g.fibre_of_slot(g.unit_slot(g.rng(gamma))).members;
  const auto n = static_cast<Eigen::Index>(to.size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) p(i, g.fibre_position(g.compose(to[sz(i)], gamma))) = 1.0;
  return p;
}

EquivarianceCheck is_equivariant(const FibreOperatorFamily& t, double tol) {
  check_shape(t);
  const Groupoid& G = *t.groupoid;
  std::vector<double> defect(sz(G.size()), 0.0);
  // V_γ maps δ_α to δ_{αγ^{-1}}, so V_γ T_s V_γ^* has entry T_s[a,b] at (aγ^{-1}, bγ^{-1}).
  parallel_for(sz(G.size()), [&](std::size_t idx) {
    const Elem gamma = static_cast<Elem>(idx);
    if (G.is_unit(gamma)) return;
    const int s = G.unit_slot(G.src(gamma)), r = G.unit_slot(G.rng(gamma));
    const auto& from = G.fibre_of_slot(s).members;
    const Elem ginv = G.inv(gamma);
    const auto n = static_cast<Eigen::Index>(from.size());
    std::vector<int> pos(from.size());
    for (std::size_t i = 0; i < from.size(); ++i) pos[i] = G.fibre_position(G.compose(from[i], ginv));
    const auto& ts = t.blocks[sz(s)];
    const auto& tr = t.blocks[sz(r)];
    Eigen::MatrixXcd diff(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) diff(pos[sz(i)], pos[sz(j)]) = ts(i, j) - tr(pos[sz(i)], pos[sz(j)]);
    defect[idx] = spectral_norm(diff);
  });
  EquivarianceCheck out;
  out.defect = defect.empty() ? 0.0 : *std::max_element(defect.begin(), defect.end());
  out.equivariant = out.defect <= tol;
  return out;
}

ModuleVector extract_convolver(const FibreOperatorFamily& t, double tol) {
  const auto check = is_equivariant(t, tol);
  if (!check.equivariant) {
    throw Error(ErrorKind::NotEquivariant, "family is not equivariant", check.defect);
  }
  const Groupoid& G = *t.groupoid;
  ModuleVector f = ModuleVector::zeros(t.groupoid);
  for (Elem gamma = 0; gamma < G.size(); ++gamma) {
    const Elem x = G.src(gamma);
    f.values[gamma] = t.blocks[sz(G.unit_slot(x))](G.fibre_position(gamma), G.fibre_position(x));
  }
  return f;
}

double max_entry_diff(const FibreOperatorFamily& a, const FibreOperatorFamily& b) {
  require_same(a.groupoid, b.groupoid, "max_entry_diff");
  check_shape(a);
  check_shape(b);
  double best = 0.0;
  for (std::size_t k = 0; k < a.blocks.size(); ++k) best = std::max(best, max_abs_diff(a.blocks[k], b.blocks[k]));
  return best;
}

double max_abs_diff(const ModuleVector& a, const ModuleVector& b) {
  require_same(a.groupoid, b.groupoid, "max_abs_diff");
  return a.values.size() == 0 ? 0.0 : (a.values - b.values).cwiseAbs().maxCoeff();
}

}  // namespace gql
