#include <gtest/gtest.h>

#include "gql/corpus.hpp"
#include "gql/error.hpp"
#include "gql/quasilocality.hpp"

using namespace gql;

namespace {

// Independent oracle: all pairs of subsets of the fibre, admissible when every
// cross pair has distance > n, normed with a full SVD.
double brute_block_sup(const FibreOperatorFamily& t, const Filtration& filt, int n) {
  const Groupoid& g = *filt.groupoid();
  double best = 0.0;
  for (int k = 0; k < g.unit_count(); ++k) {
    const auto& m = g.fibre_of_slot(k).members;
    const int size = static_cast<int>(m.size());
    for (int a = 1; a < (1 << size); ++a)
      for (int b = 1; b < (1 << size); ++b) {
        bool ok = true;
        for (int i = 0; i < size && ok; ++i)
          for (int j = 0; j < size && ok; ++j)
            if ((a >> i & 1) && (b >> j & 1)) ok = filt.level_of(g.compose(m[i], g.inv(m[j]))) > n;
        if (!ok) continue;
        Eigen::MatrixXcd blk = Eigen::MatrixXcd::Zero(size, size);
        for (int i = 0; i < size; ++i)
          for (int j = 0; j < size; ++j)
            if ((a >> i & 1) && (b >> j & 1)) blk(i, j) = t.blocks[k](i, j);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(blk);
        best = std::max(best, svd.singularValues()(0));
      }
  }
  return best;
}

double brute_vector_sup(const FibreOperatorFamily& t, const ModuleVector& xi, const Filtration& filt, int n) {
  const Groupoid& g = *filt.groupoid();
  double best = 0.0;
  for (int k = 0; k < g.unit_count(); ++k) {
    const auto& m = g.fibre_of_slot(k).members;
    const int size = static_cast<int>(m.size());
    const Eigen::VectorXcd v = xi.restrict_to(k);
    for (int a = 1; a < (1 << size); ++a)
      for (int b = 1; b < (1 << size); ++b) {
        bool ok = true;
        for (int i = 0; i < size && ok; ++i)
          for (int j = 0; j < size && ok; ++j)
            if ((a >> i & 1) && (b >> j & 1)) ok = filt.level_of(g.compose(m[i], g.inv(m[j]))) > n;
        if (!ok) continue;
        Eigen::VectorXcd y = Eigen::VectorXcd::Zero(size);
        for (int i = 0; i < size; ++i)
          for (int j = 0; j < size; ++j)
            if ((a >> i & 1) && (b >> j & 1)) y[i] += t.blocks[k](i, j) * v[j];
        best = std::max(best, y.norm());
      }
  }
  return best;
}

}  // namespace

TEST(Separation, Examples) {
  auto entry = path_entry(3);
  const auto& g = entry.filt.groupoid();
  const auto units = entry.filt.level(0);
  const auto f = ModuleVector::delta(g, g->index_of("(0,1)"));
  const auto h = ModuleVector::delta(g, g->index_of("(2,1)"));
  EXPECT_TRUE(is_K_separated(f, h, units));
  EXPECT_FALSE(is_K_separated(f, f, units));
  EXPECT_FALSE(is_K_separated(f, f, entry.filt.level(2)));
  const auto a = ModuleVector::delta(g, g->index_of("(0,0)"));
  const auto b = ModuleVector::delta(g, g->index_of("(2,2)"));
  EXPECT_TRUE(is_K_separated(a, b, entry.filt.level(1)));
  // Different fibres never interact.
  EXPECT_TRUE(is_K_separated(a, b, entry.filt.level(2)));
  const auto c = ModuleVector::delta(g, g->index_of("(2,0)"));
  EXPECT_TRUE(is_K_separated(a, c, entry.filt.level(1)));
  EXPECT_FALSE(is_K_separated(a, c, entry.filt.level(2)));
}

TEST(SupportLevel, Examples) {
  Rng rng(21);
  for (const auto& e : standard_corpus()) {
    for (int n = 0; n <= e.filt.depth(); ++n) {
      const auto f = random_banded_function(e.filt, n, rng);
      EXPECT_LE(support_level(lambda(f), e.filt), n) << e.name;
      EXPECT_LE(function_support_level(f, e.filt), n) << e.name;
    }
    EXPECT_EQ(support_level(multiplication_operator(random_function(e.filt.groupoid(), rng)), e.filt), 0);
    for (int trial = 0; trial < 5; ++trial) {
      const int n1 = static_cast<int>(rng() % (e.filt.depth() + 1)), n2 = static_cast<int>(rng() % (e.filt.depth() + 1));
      const auto f = random_banded_function(e.filt, n1, rng), h = random_banded_function(e.filt, n2, rng);
      EXPECT_LE(support_level(lambda(convolve(f, h)), e.filt),
                support_level(lambda(f), e.filt) + support_level(lambda(h), e.filt));
      const auto t = random_banded_family(e.filt, n1, rng);
      EXPECT_EQ(support_level(t, e.filt), support_level(t.adjoint(), e.filt));
    }
  }
}

TEST(PropagationProfile, MatchesBruteForce) {
  Rng rng(22);
  for (const auto& e : {path_entry(5), cyclic_entry(4), s3_entry(), reflection_entry(), rotation_entry(4)}) {
    const auto t = random_family(e.filt.groupoid(), rng);
    const auto p = propagation_profile(t, e.filt);
    for (int n = 0; n <= e.filt.depth(); ++n) {
      const double oracle = brute_block_sup(t, e.filt, n);
      EXPECT_EQ(p.levels[n].method, ProfileMethod::Exact);
      EXPECT_NEAR(p.levels[n].lower, oracle, 1e-10 * (1 + oracle)) << e.name << " level " << n;
      EXPECT_EQ(p.levels[n].lower, p.levels[n].upper);
    }
  }
}

TEST(PropagationProfile, BandedPathOfSix) {
  Rng rng(23);
  const auto e = path_entry(6);
  for (int band = 0; band <= 5; ++band) {
    const auto t = random_banded_family(e.filt, band, rng);
    const auto p = propagation_profile(t, e.filt);
    for (int n = 0; n <= e.filt.depth(); ++n) {
      if (n >= band) {
        EXPECT_EQ(p.levels[n].upper, 0.0) << "band " << band << " level " << n;
      } else {
        EXPECT_GT(p.levels[n].lower, 0.0) << "band " << band << " level " << n;
        EXPECT_NEAR(p.levels[n].lower, brute_block_sup(t, e.filt, n), 1e-10);
      }
    }
  }
}

TEST(PropagationProfile, DiagonalIsZero) {
  Rng rng(24);
  for (const auto& e : standard_corpus()) {
    const auto p = propagation_profile(multiplication_operator(random_function(e.filt.groupoid(), rng)), e.filt);
    for (const auto& lvl : p.levels) EXPECT_EQ(lvl.upper, 0.0) << e.name;
  }
}

TEST(PropagationProfile, BracketContainsExactValue) {
  Rng rng(25);
  for (const auto& e : {path_entry(7), path_entry(8), rotation_entry(4)}) {
    for (int trial = 0; trial < 3; ++trial) {
      const auto t = random_family(e.filt.groupoid(), rng);
      const auto exact = propagation_profile(t, e.filt, 14);
      const auto bracket = propagation_profile(t, e.filt, 2);
      for (int n = 0; n <= e.filt.depth(); ++n) {
        const auto& b = bracket.levels[n];
        EXPECT_EQ(b.method, ProfileMethod::Bracketed);
        EXPECT_LE(b.lower, exact.levels[n].lower + 1e-10) << e.name << " level " << n;
        EXPECT_GE(b.upper, exact.levels[n].upper - 1e-10) << e.name << " level " << n;
        EXPECT_LE(b.lower, b.upper);
      }
    }
  }
}

TEST(PropagationProfile, MonotoneAndSymmetric) {
  Rng rng(26);
  for (const auto& e : standard_corpus()) {
    const auto t = random_family(e.filt.groupoid(), rng);
    const auto p = propagation_profile(t, e.filt);
    for (std::size_t n = 1; n < p.levels.size(); ++n) {
      EXPECT_LE(p.levels[n].upper, p.levels[n - 1].upper);
      EXPECT_LE(p.levels[n].lower, p.levels[n - 1].lower);
    }
  }
  // Large fibres take the bracketed path and stay ordered.
  const auto big = path_entry(20);
  const auto t = random_banded_family(big.filt, 6, rng);
  const auto p = propagation_profile(t, big.filt);
  for (std::size_t n = 0; n < p.levels.size(); ++n) {
    EXPECT_EQ(p.levels[n].method, ProfileMethod::Bracketed);
    EXPECT_LE(p.levels[n].lower, p.levels[n].upper);
    if (n >= 6) {
      EXPECT_EQ(p.levels[n].upper, 0.0);
    }
    if (n > 0) {
      EXPECT_LE(p.levels[n].upper, p.levels[n - 1].upper);
    }
  }
  EXPECT_GT(p.levels[5].lower, 0.0);
}

TEST(PropagationProfile, SampledSeparatedPairsRespectProfile) {
  Rng rng(27);
  std::bernoulli_distribution coin(0.4);
  for (const auto& e : standard_corpus()) {
    const auto& g = e.filt.groupoid();
    const auto t = random_family(g, rng);
    const auto p = propagation_profile(t, e.filt);
    for (int n = 0; n <= e.filt.depth(); ++n) {
      const auto k = e.filt.level(n);
      for (int trial = 0; trial < 40; ++trial) {
        ModuleVector f = ModuleVector::zeros(g), h = ModuleVector::zeros(g);
        for (Elem x = 0; x < g->size(); ++x) {
          if (coin(rng)) f.values[x] = random_function(g, rng).values[x];
          if (coin(rng)) h.values[x] = random_function(g, rng).values[x];
        }
        if (!is_K_separated(f, h, k)) continue;
        const double lhs = operator_norm(multiplication_operator(h) * t * multiplication_operator(f));
        EXPECT_LE(lhs, p.levels[n].upper * sup_norm(f) * sup_norm(h) + 1e-9) << e.name << " level " << n;
      }
    }
  }
}

TEST(FibreMetric, ExamplesAndAxioms) {
  const auto path = path_entry(3);
  const auto& g = *path.filt.groupoid();
  const auto m = fibre_metric(path.filt, g.index_of("(2,2)"));
  auto pos = [&](const std::string& id) { return g.fibre_position(g.index_of(id)); };
  EXPECT_EQ(m.d[pos("(0,2)")][pos("(1,2)")], 1);
  EXPECT_EQ(m.d[pos("(0,2)")][pos("(2,2)")], 2);

  const auto z4 = cyclic_entry(4);
  const auto& gz = *z4.filt.groupoid();
  const auto mz = fibre_metric(z4.filt, gz.units()[0]);
  EXPECT_EQ(mz.d[gz.fibre_position(gz.index_of("0"))][gz.fibre_position(gz.index_of("2"))], 2);
  EXPECT_THROW(fibre_metric(z4.filt, gz.index_of("1")), Error);

  for (const auto& e : standard_corpus()) {
    for (Elem x : e.filt.groupoid()->units()) {
      const auto fm = fibre_metric(e.filt, x);
      const std::size_t n = fm.members.size();
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_EQ(fm.d[i][i], 0);
        for (std::size_t j = 0; j < n; ++j) {
          EXPECT_EQ(fm.d[i][j], fm.d[j][i]);
          if (i != j) {
            EXPECT_GT(fm.d[i][j], 0);
          }
          for (std::size_t k = 0; k < n; ++k) EXPECT_LE(fm.d[i][k], fm.d[i][j] + fm.d[j][k]) << e.name;
        }
      }
    }
  }
}

TEST(GeometryStats, Examples) {
  const auto pair = path_entry(5);
  const auto s = geometry_stats(pair.filt);
  EXPECT_EQ(s.max_ball[0], 1);
  EXPECT_EQ(s.max_ball[1], 3);
  EXPECT_EQ(s.max_ball.back(), 5);
  for (const auto& e : standard_corpus()) {
    const auto st = geometry_stats(e.filt);
    for (std::size_t n = 0; n < st.max_ball.size(); ++n) EXPECT_LE(st.max_ball[n], st.range_bound[n]) << e.name;
    EXPECT_EQ(st.max_ball[0], 1);
  }
}

TEST(Variation, Examples) {
  const auto e = path_entry(6);
  const auto& g = e.filt.groupoid();
  EXPECT_EQ(variation_of(ModuleVector::constant(g, 3.0), e.filt, 5), 0.0);
  EXPECT_EQ(variation_of(ModuleVector::delta(g, g->index_of("(1,2)")), e.filt, 5), 1.0);
  // h((x, y)) = x / diam is Lipschitz in the range point.
  ModuleVector h = ModuleVector::zeros(g);
  for (int x = 0; x < 6; ++x)
    for (int y = 0; y < 6; ++y) h.values[g->index_of(pair_id(e.points[x], e.points[y]))] = x / 5.0;
  for (int n = 0; n <= 5; ++n) EXPECT_LE(variation_of(h, e.filt, n), n / 5.0 + 1e-15);
}

TEST(Commutator, Examples) {
  Rng rng(28);
  for (const auto& e : standard_corpus()) {
    const auto& g = e.filt.groupoid();
    const auto t = random_family(g, rng);
    EXPECT_LE(commutator_defect(t, ModuleVector::constant(g, 2.0)), 1e-12);
    EXPECT_LE(commutator_defect(multiplication_operator(random_function(g, rng)), random_function(g, rng)), 1e-12);
    const auto stats = geometry_stats(e.filt);
    for (int n = 0; n <= e.filt.depth(); ++n) {
      const auto tn = random_banded_family(e.filt, n, rng);
      const auto h = random_function(g, rng);
      const double delta = variation_of(h, e.filt, n);
      EXPECT_LE(commutator_defect(tn, h), delta * stats.max_ball[n] * operator_norm(tn) + 1e-10) << e.name;
    }
  }
}

TEST(VectorProfile, Examples) {
  Rng rng(29);
  for (const auto& e : {path_entry(5), cyclic_entry(4), reflection_entry()}) {
    const auto& g = e.filt.groupoid();
    const auto t = random_family(g, rng);
    const auto xi = random_function(g, rng);
    const auto zero = vector_ql_profile(t, ModuleVector::zeros(g), e.filt);
    for (const auto& l : zero.levels) EXPECT_EQ(l.upper, 0.0);
    const auto p = vector_ql_profile(t, xi, e.filt);
    const auto op = propagation_profile(t, e.filt);
    for (int n = 0; n <= e.filt.depth(); ++n) {
      EXPECT_NEAR(p.levels[n].lower, brute_vector_sup(t, xi, e.filt, n), 1e-10) << e.name;
      EXPECT_LE(p.levels[n].upper, op.levels[n].upper * module_norm(xi) + 1e-10);
    }
    const auto banded = random_banded_family(e.filt, 1, rng);
    const auto pb = vector_ql_profile(banded, xi, e.filt);
    for (int n = 1; n <= e.filt.depth(); ++n) EXPECT_EQ(pb.levels[n].upper, 0.0);
  }
  // Bracketed path on a larger fibre still brackets the exact value.
  const auto e = path_entry(9);
  const auto t = random_family(e.filt.groupoid(), rng);
  const auto xi = random_function(e.filt.groupoid(), rng);
  const auto exact = vector_ql_profile(t, xi, e.filt, 14);
  const auto bracket = vector_ql_profile(t, xi, e.filt, 3);
  for (int n = 0; n <= e.filt.depth(); ++n) {
    EXPECT_LE(bracket.levels[n].lower, exact.levels[n].lower + 1e-10);
    EXPECT_GE(bracket.levels[n].upper, exact.levels[n].upper - 1e-10);
  }
}

TEST(StepFunction, SeparatesSupportsAndBoundsBlocks) {
  Rng rng(30);
  std::bernoulli_distribution coin(0.35);
  for (const auto& e : {path_entry(6), cyclic_entry(4), s3_entry(), rotation_entry(4), reflection_entry()}) {
    const auto& g = e.filt.groupoid();
    const auto t = random_family(g, rng);
    for (int n = 1; n <= e.filt.depth(); ++n) {
      const auto k = e.filt.level(n);
      for (int trial = 0; trial < 40; ++trial) {
        ModuleVector f = ModuleVector::zeros(g), h = ModuleVector::zeros(g);
        const auto vals = random_function(g, rng);
        for (Elem x = 0; x < g->size(); ++x) {
          if (coin(rng)) f.values[x] = vals[x];
          else if (coin(rng)) h.values[x] = vals[x];
        }
        if (!is_K_separated(f, h, k)) continue;
        const auto step = step_function(f, e.filt, n);
        for (Elem x = 0; x < g->size(); ++x) {
          if (std::abs(f[x]) > kEntryTol) {
            EXPECT_EQ(step[x], Complex(1.0));
          }
          if (std::abs(h[x]) > kEntryTol) {
            EXPECT_EQ(step[x], Complex(0.0));
          }
          const double scaled = step[x].real() * n;
          EXPECT_EQ(scaled, std::round(scaled));
        }
        EXPECT_LE(variation_of(step, e.filt, 1), 1.0 / n + 1e-15);
        const double lhs = operator_norm(multiplication_operator(h) * t * multiplication_operator(f));
        EXPECT_LE(lhs, commutator_defect(t, step) * sup_norm(f) * sup_norm(h) + 1e-12) << e.name;
      }
    }
  }
  EXPECT_THROW(step_function(ModuleVector::zeros(path_entry(2).filt.groupoid()), path_entry(2).filt, 0), Error);
}
