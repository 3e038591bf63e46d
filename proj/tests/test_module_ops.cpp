#include <gtest/gtest.h>

#include <cstdlib>

#include "gql/corpus.hpp"
#include "gql/error.hpp"
#include "gql/module_ops.hpp"

using namespace gql;

namespace {

const Complex I(0.0, 1.0);

GroupoidPtr z2() { return group_groupoid(cyclic_group(2)); }

GroupoidPtr pair_on(int m) {
  const auto pts = path_points(m);
  return pair_groupoid(pts);
}

// f on the pair groupoid as the matrix F(x, y) = f((x, y)).
Eigen::MatrixXcd as_matrix(const ModuleVector& f, const std::vector<std::string>& pts) {
  const auto m = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXcd out(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) out(i, j) = f.values[f.groupoid->index_of(pair_id(pts[i], pts[j]))];
  return out;
}

}  // namespace

TEST(Convolve, GroupExample) {
  auto g = z2();
  const auto u = ModuleVector::delta(g, g->index_of("1"));
  EXPECT_EQ(max_abs_diff(convolve(u, u), ModuleVector::delta(g, g->index_of("0"))), 0.0);
}

TEST(Convolve, PairGroupoidIsMatrixProduct) {
  Rng rng(7);
  const auto pts = path_points(4);
  auto g = pair_groupoid(pts);
  const auto f = random_function(g, rng), h = random_function(g, rng);
  const Eigen::MatrixXcd expect = as_matrix(f, pts) * as_matrix(h, pts);
  EXPECT_LE((as_matrix(convolve(f, h), pts) - expect).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Convolve, UnitsAreTheIdentity) {
  Rng rng(1);
  for (const auto& e : standard_corpus()) {
    const auto& g = e.filt.groupoid();
    const auto f = random_function(g, rng);
    EXPECT_LE(max_abs_diff(convolve(ModuleVector::units_indicator(g), f), f), 1e-15) << e.name;
    EXPECT_LE(max_abs_diff(convolve(f, ModuleVector::units_indicator(g)), f), 1e-15) << e.name;
  }
}

TEST(Convolve, RejectsMixedGroupoids) {
  EXPECT_THROW(convolve(ModuleVector::zeros(z2()), ModuleVector::zeros(pair_on(2))), Error);
}

TEST(Star, Examples) {
  Rng rng(2);
  auto g = pair_on(3);
  auto real_units = ModuleVector::units_indicator(g);
  real_units.values *= 2.5;
  EXPECT_EQ(max_abs_diff(star(real_units), real_units), 0.0);

  const auto pts = path_points(3);
  const auto f = random_function(g, rng);
  EXPECT_LE((as_matrix(star(f), pts) - as_matrix(f, pts).adjoint()).cwiseAbs().maxCoeff(), 0.0);

  const Elem gamma = g->index_of("(0,2)");
  const auto s = star(I * ModuleVector::delta(g, gamma));
  EXPECT_EQ(s.values[g->inv(gamma)], -I);
  EXPECT_EQ(s.values.cwiseAbs().sum(), 1.0);

  const auto h = random_function(g, rng);
  EXPECT_EQ(max_abs_diff(star(star(f)), f), 0.0);
  EXPECT_LE(max_abs_diff(star(convolve(f, h)), convolve(star(h), star(f))), 1e-13);
}

TEST(InnerProduct, BasisAndCauchySchwarz) {
  auto g = pair_on(3);
  const Elem a = g->index_of("(0,1)"), b = g->index_of("(2,1)");
  const auto ip = inner_product(ModuleVector::delta(g, a), ModuleVector::delta(g, a));
  for (int k = 0; k < g->unit_count(); ++k) EXPECT_EQ(ip[k], g->units()[k] == g->src(a) ? 1.0 : 0.0);
  for (Complex v : inner_product(ModuleVector::delta(g, a), ModuleVector::delta(g, b))) EXPECT_EQ(v, 0.0);

  Rng rng(3);
  auto z4 = group_groupoid(cyclic_group(4));
  const auto x = random_function(z4, rng), y = random_function(z4, rng);
  EXPECT_LE(std::abs(inner_product(x, y)[0] - x.values.dot(y.values)), 1e-13);

  for (const auto& e : standard_corpus()) {
    const auto& G = e.filt.groupoid();
    const auto p = random_function(G, rng), q = random_function(G, rng);
    const auto pq = inner_product(p, q), pp = inner_product(p, p), qq = inner_product(q, q);
    for (int k = 0; k < G->unit_count(); ++k) {
      EXPECT_GE(pp[k].real(), 0.0);
      EXPECT_LE(std::abs(pp[k].imag()), 1e-13);
      EXPECT_LE(std::abs(pq[k]), std::sqrt(pp[k].real() * qq[k].real()) + 1e-12);
      // Sesquilinearity in the second slot, conjugate-linearity in the first.
      const auto lin = inner_product(p, (2.0 - I) * q);
      EXPECT_LE(std::abs(lin[k] - (2.0 - I) * pq[k]), 1e-12);
      const auto conj_lin = inner_product((2.0 - I) * p, q);
      EXPECT_LE(std::abs(conj_lin[k] - (2.0 + I) * pq[k]), 1e-12);
    }
  }
}

TEST(Lambda, Examples) {
  auto g = pair_on(3);
  const auto id = lambda(ModuleVector::units_indicator(g));
  EXPECT_EQ(max_entry_diff(id, FibreOperatorFamily::identity(g)), 0.0);

  // Same matrix F(x, x') on every fibre of the pair groupoid.
  Rng rng(4);
  const auto pts = path_points(3);
  const auto f = random_function(g, rng);
  const auto l = lambda(f);
  for (const auto& b : l.blocks) EXPECT_EQ((b - as_matrix(f, pts)).cwiseAbs().maxCoeff(), 0.0);

  auto z = z2();
  const auto swap = lambda(ModuleVector::delta(z, z->index_of("1")));
  Eigen::MatrixXcd expect(2, 2);
  expect << 0, 1, 1, 0;
  EXPECT_EQ((swap.blocks[0] - expect).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Norms, Examples) {
  auto g = pair_on(3);
  EXPECT_NEAR(reduced_norm(ModuleVector::units_indicator(g)), 1.0, 1e-12);
  for (Elem e = 0; e < g->size(); ++e) EXPECT_NEAR(reduced_norm(ModuleVector::delta(g, e)), 1.0, 1e-12);
  auto z = z2();
  EXPECT_NEAR(reduced_norm(ModuleVector::constant(z, 1.0)), 2.0, 2e-10);

  EXPECT_EQ(operator_norm(FibreOperatorFamily::zeros(g)), 0.0);
  EXPECT_NEAR(operator_norm(FibreOperatorFamily::identity(g)), 1.0, 1e-12);
  auto t = FibreOperatorFamily::zeros(z);
  t.blocks[0](0, 1) = 2.0;
  EXPECT_NEAR(operator_norm(t), 2.0, 2e-10);
}

TEST(Norms, AgreeWithSvd) {
  Rng rng(5);
  for (const auto& e : standard_corpus()) {
    const auto t = random_family(e.filt.groupoid(), rng);
    const auto norms = fibre_norms(t);
    for (std::size_t k = 0; k < t.blocks.size(); ++k) {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(t.blocks[k]);
      EXPECT_NEAR(norms[k], svd.singularValues()(0), 1e-10 * svd.singularValues()(0)) << e.name;
    }
  }
}

TEST(Apply, Examples) {
  Rng rng(6);
  for (const auto& e : standard_corpus()) {
    const auto& g = e.filt.groupoid();
    const auto xi = random_function(g, rng), f = random_function(g, rng);
    EXPECT_EQ(max_abs_diff(apply(FibreOperatorFamily::identity(g), xi), xi), 0.0);
    EXPECT_EQ(max_abs_diff(apply(FibreOperatorFamily::zeros(g), xi), ModuleVector::zeros(g)), 0.0);
    EXPECT_LE(max_abs_diff(apply(lambda(f), xi), convolve(f, xi)), 1e-12) << e.name;
  }
}

TEST(Rho, Examples) {
  Rng rng(8);
  auto z = z2();
  const auto xi = random_function(z, rng);
  EXPECT_EQ(max_abs_diff(rho_apply(ModuleVector::units_indicator(z), xi), xi), 0.0);
  const auto swapped = rho_apply(ModuleVector::delta(z, z->index_of("1")), xi);
  EXPECT_EQ(swapped.values[0], xi.values[1]);
  EXPECT_EQ(swapped.values[1], xi.values[0]);
  auto g = pair_on(4);
  const auto g1 = random_function(g, rng), g2 = random_function(g, rng), v = random_function(g, rng);
  EXPECT_LE(max_abs_diff(rho_apply(g2, rho_apply(g1, v)), rho_apply(convolve(g1, g2), v)), 1e-12);
}

TEST(MultiplicationOperator, Examples) {
  Rng rng(9);
  auto g = pair_on(3);
  EXPECT_EQ(max_entry_diff(multiplication_operator(ModuleVector::constant(g, 1.0)), FibreOperatorFamily::identity(g)),
            0.0);
  const auto h = random_function(g, rng);
  EXPECT_NEAR(operator_norm(multiplication_operator(h)), sup_norm(h), 1e-12);

  // g = φ∘r is equivariant, g = φ∘s is not (φ non-constant).
  ModuleVector by_range = ModuleVector::zeros(g), by_source = ModuleVector::zeros(g);
  for (Elem e = 0; e < g->size(); ++e) {
    by_range.values[e] = 1.0 + g->unit_slot(g->rng(e));
    by_source.values[e] = 1.0 + g->unit_slot(g->src(e));
  }
  // Oracle: g(β) = g(βγ^{-1}) for all composable pairs.
  auto invariant = [&](const ModuleVector& v) {
    for (Elem b = 0; b < g->size(); ++b)
      for (Elem c = 0; c < g->size(); ++c)
        if (g->src(b) == g->src(c) && v.values[b] != v.values[g->compose(b, g->inv(c))]) return false;
    return true;
  };
  EXPECT_TRUE(invariant(by_range));
  EXPECT_TRUE(is_equivariant(multiplication_operator(by_range)).equivariant);
  EXPECT_FALSE(invariant(by_source));
  const auto chk = is_equivariant(multiplication_operator(by_source));
  EXPECT_FALSE(chk.equivariant);
  EXPECT_GT(chk.defect, 0.5);
}

TEST(Translate, Examples) {
  Rng rng(10);
  auto g = pair_on(4);
  for (Elem gamma = 0; gamma < g->size(); ++gamma) {
    const auto n = static_cast<Eigen::Index>(source_fibre(*g, g->src(gamma)).size());
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = Complex(static_cast<double>(i), 1.0);
    const auto w = translate(*g, gamma, v);
    EXPECT_NEAR(w.norm(), v.norm(), 1e-12);
    EXPECT_EQ((translate(*g, g->inv(gamma), w) - v).cwiseAbs().maxCoeff(), 0.0);
    if (g->is_unit(gamma)) {
      EXPECT_EQ((w - v).cwiseAbs().maxCoeff(), 0.0);
    }
    // V_γ δ_α = δ_{αγ^{-1}}.
    for (Elem alpha : source_fibre(*g, g->src(gamma)).members) {
      Eigen::VectorXcd d = Eigen::VectorXcd::Zero(n);
      d[g->fibre_position(alpha)] = 1.0;
      const auto out = translate(*g, gamma, d);
      const Elem target = g->compose(alpha, g->inv(gamma));
      EXPECT_EQ(out[g->fibre_position(target)], 1.0);
      EXPECT_EQ(out.cwiseAbs().sum(), 1.0);
    }
  }
  EXPECT_THROW(translate(*g, 0, Eigen::VectorXcd::Zero(1)), Error);
}

TEST(Equivariance, Examples) {
  Rng rng(11);
  for (const auto& e : standard_corpus()) {
    const auto chk = is_equivariant(lambda(random_function(e.filt.groupoid(), rng)));
    EXPECT_TRUE(chk.equivariant) << e.name;
    EXPECT_LE(chk.defect, 1e-12);
  }
  const std::vector<std::string> ab{"a", "b"};
  auto g = pair_groupoid(ab);
  auto t = FibreOperatorFamily::zeros(g);
  t.blocks[static_cast<std::size_t>(g->unit_slot(g->index_of("(b,b)")))].setIdentity();
  const auto chk = is_equivariant(t);
  EXPECT_FALSE(chk.equivariant);
  EXPECT_NEAR(chk.defect, 1.0, 1e-12);
}

TEST(ExtractConvolver, Examples) {
  Rng rng(12);
  for (const auto& e : standard_corpus()) {
    const auto& g = e.filt.groupoid();
    const auto f = random_function(g, rng);
    EXPECT_LE(max_abs_diff(extract_convolver(lambda(f)), f), 1e-15) << e.name;
    EXPECT_EQ(max_abs_diff(extract_convolver(FibreOperatorFamily::identity(g)), ModuleVector::units_indicator(g)), 0.0);
    // Adjoint compatibility (f_T)* = f_{T*}.
    const auto t = lambda(f);
    EXPECT_LE(max_abs_diff(star(extract_convolver(t)), extract_convolver(t.adjoint())), 1e-15);
    // Round trip from the operator side.
    EXPECT_LE(max_entry_diff(lambda(extract_convolver(t)), t), 1e-15);
  }
  auto g = pair_on(3);
  ModuleVector by_range = ModuleVector::zeros(g);
  for (Elem e = 0; e < g->size(); ++e) by_range.values[e] = Complex(1.0 + g->unit_slot(g->rng(e)), -1.0);
  const auto f = extract_convolver(multiplication_operator(by_range));
  for (Elem e = 0; e < g->size(); ++e) {
    if (g->is_unit(e)) {
      EXPECT_EQ(f.values[e], by_range.values[e]);
    } else {
      EXPECT_EQ(f.values[e], 0.0);
    }
  }
  try {
    extract_convolver(random_family(g, rng));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotEquivariant);
    ASSERT_TRUE(e.defect().has_value());
    EXPECT_GT(*e.defect(), 1e-9);
  }
}

TEST(Properties, StarHomomorphismAndCStarIdentity) {
  Rng rng(13);
  for (const auto& e : standard_corpus()) {
    const auto& g = e.filt.groupoid();
    for (int trial = 0; trial < 50; ++trial) {
      const auto f = random_function(g, rng), h = random_function(g, rng);
      const auto lf = lambda(f), lh = lambda(h);
      const auto prod = lambda(convolve(f, h));
      const auto expect = lf * lh;
      for (std::size_t k = 0; k < prod.blocks.size(); ++k) {
        EXPECT_LE(spectral_norm(prod.blocks[k] - expect.blocks[k]), 1e-10) << e.name;
      }
      EXPECT_LE(max_entry_diff(lambda(star(f)), lf.adjoint()), 1e-12);
      const double nf = reduced_norm(f);
      EXPECT_LE(std::abs(reduced_norm(convolve(star(f), f)) - nf * nf), 1e-8 * nf * nf) << e.name;
    }
  }
}

TEST(Parallel, ResultsDoNotDependOnWorkerCount) {
  Rng rng(14);
  const auto entry = path_entry(8);
  const auto f = random_function(entry.filt.groupoid(), rng);
  setenv("GQL_THREADS", "1", 1);
  const auto one = lambda(f);
  const auto n1 = fibre_norms(one);
  setenv("GQL_THREADS", "4", 1);
  const auto four = lambda(f);
  const auto n4 = fibre_norms(four);
  unsetenv("GQL_THREADS");
  EXPECT_EQ(max_entry_diff(one, four), 0.0);
  EXPECT_EQ(n1, n4);
}
