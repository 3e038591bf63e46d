#include "gql/verify.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "gql/amenability.hpp"
#include "gql/approximation.hpp"
#include "gql/corpus.hpp"
#include "gql/io.hpp"
#include "gql/linalg.hpp"
#include "gql/quasilocality.hpp"
#include "gql/semidirect.hpp"

namespace gql {

namespace {

class Check {
 public:
  explicit Check(std::string name) { r_.name = std::move(name); }

  // Records one case; keeps only the first failure.
  void expect(bool ok, const std::function<std::string()>& describe) {
    ++r_.cases;
    if (ok || !r_.passed) return;
    r_.passed = false;
    r_.counterexample = describe();
  }
  void le(double value, double bound, const std::string& where) {
    expect(value <= bound, [&] { return where + ": " + format_double(value) + " > " + format_double(bound); });
  }
  CheckResult result() const { return r_; }

 private:
  CheckResult r_;
};

std::string at(const CorpusEntry& e, int trial) { return e.name + " trial " + std::to_string(trial); }

std::vector<CorpusEntry> small_corpus() {
  return {cyclic_entry(2), cyclic_entry(4), s3_entry(), path_entry(3), swap_entry(), reflection_entry()};
}

using CheckFn = std::function<void(Check&, Rng&, int)>;

void partition(Check& c, Rng&, int) {
  for (const auto& e : standard_corpus()) {
    const Groupoid& g = *e.filt.groupoid();
    std::size_t total = 0;
    for (Elem x : g.units()) total += source_fibre(g, x).size();
    c.expect(total == static_cast<std::size_t>(g.size()), [&] { return e.name + ": fibres cover " + std::to_string(total); });
  }
}

void involution(Check& c, Rng&, int) {
  for (const auto& e : standard_corpus()) {
    const Groupoid& g = *e.filt.groupoid();
    for (Elem a = 0; a < g.size(); ++a) {
      c.expect(g.inv(g.inv(a)) == a && g.src(g.inv(a)) == g.rng(a) && g.rng(g.inv(a)) == g.src(a),
               [&] { return e.name + ": inverse of '" + g.name(a) + "'"; });
    }
  }
}

void submultiplicative(Check& c, Rng&, int) {
  for (const auto& e : standard_corpus()) {
    const Groupoid& g = *e.filt.groupoid();
    const int depth = e.filt.depth();
    for (int n = 0; n <= depth; ++n)
      for (int m = 0; n + m <= depth; ++m)
        for (Elem a : e.filt.level(n))
          for (Elem b : e.filt.level(m)) {
            const Elem ab = g.compose(a, b);
            if (ab == kUndefined) continue;
            c.expect(e.filt.contains(n + m, ab), [&] {
              return e.name + ": '" + g.name(a) + "' '" + g.name(b) + "' leaves K_" + std::to_string(n + m);
            });
          }
  }
}

void simply_transitive(Check& c, Rng&, int) {
  for (int m : {2, 3, 4, 5}) {
    const auto e = rotation_entry(m);
    const Groupoid& g = *e.filt.groupoid();
    c.expect(is_principal(g) && is_transitive(g), [&] { return e.name + " is not principal and transitive"; });
  }
}

void star_homomorphism(Check& c, Rng& rng, int trials) {
  for (const auto& e : standard_corpus()) {
    const auto& g = e.filt.groupoid();
    for (int t = 0; t < trials; ++t) {
      const auto f = random_function(g, rng), h = random_function(g, rng);
      const auto lhs = lambda(convolve(f, h)), rhs = lambda(f) * lambda(h);
      double worst = 0.0;
      for (std::size_t k = 0; k < lhs.blocks.size(); ++k) worst = std::max(worst, spectral_norm(lhs.blocks[k] - rhs.blocks[k]));
      c.le(worst, 1e-10, at(e, t) + " product");
      c.le(max_entry_diff(lambda(star(f)), lambda(f).adjoint()), 1e-12, at(e, t) + " adjoint");
    }
  }
}

void cstar_identity(Check& c, Rng& rng, int trials) {
  for (const auto& e : standard_corpus()) {
    const auto& g = e.filt.groupoid();
    for (int t = 0; t < trials; ++t) {
      const auto f = random_function(g, rng);
      const double n = reduced_norm(f);
      c.le(std::abs(reduced_norm(convolve(star(f), f)) - n * n), 1e-8 * n * n, at(e, t));
    }
  }
}

void cauchy_schwarz(Check& c, Rng& rng, int trials) {
  for (const auto& e : standard_corpus()) {
    const auto& g = e.filt.groupoid();
    for (int t = 0; t < trials; ++t) {
      const auto eta = random_function(g, rng), xi = random_function(g, rng);
      const auto ip = inner_product(eta, xi);
      for (int k = 0; k < g->unit_count(); ++k) {
        c.le(std::abs(ip[static_cast<std::size_t>(k)]), eta.restrict_to(k).norm() * xi.restrict_to(k).norm() + 1e-12,
             at(e, t));
      }
    }
  }
}

void convolver_round_trip(Check& c, Rng& rng, int trials) {
  for (const auto& e : standard_corpus()) {
    const auto& g = e.filt.groupoid();
    for (int t = 0; t < trials; ++t) {
      const auto f = random_function(g, rng);
      c.le(max_abs_diff(extract_convolver(lambda(f)), f), 1e-9, at(e, t));
    }
  }
}

void apply_is_convolution(Check& c, Rng& rng, int trials) {
  for (const auto& e : standard_corpus()) {
    const auto& g = e.filt.groupoid();
    for (int t = 0; t < trials; ++t) {
      const auto f = random_function(g, rng), xi = random_function(g, rng);
      c.le(max_abs_diff(apply(lambda(f), xi), convolve(f, xi)), 1e-12, at(e, t));
    }
  }
}

void separated_pairs(Check& c, Rng& rng, int trials) {
  std::bernoulli_distribution coin(0.4);
  for (const auto& e : standard_corpus()) {
    const auto& g = e.filt.groupoid();
    const auto t = random_family(g, rng);
    const auto p = propagation_profile(t, e.filt);
    for (int n = 0; n <= e.filt.depth(); ++n) {
      const auto k = e.filt.level(n);
      for (int trial = 0; trial < trials; ++trial) {
        ModuleVector f = ModuleVector::zeros(g), h = ModuleVector::zeros(g);
        const auto vals = random_function(g, rng);
        for (Elem x = 0; x < g->size(); ++x) {
          if (coin(rng)) {
            f.values[x] = vals[x];
          } else if (coin(rng)) {
            h.values[x] = vals[x];
          }
        }
        if (!is_K_separated(f, h, k)) continue;
        const double lhs = operator_norm(multiplication_operator(h) * t * multiplication_operator(f));
        c.le(lhs, p.levels[static_cast<std::size_t>(n)].upper * sup_norm(f) * sup_norm(h) + 1e-9,
             at(e, trial) + " level " + std::to_string(n));
      }
    }
  }
}

void step_function_bound(Check& c, Rng& rng, int trials) {
  std::bernoulli_distribution coin(0.35);
  for (const auto& e : standard_corpus()) {
    const auto& g = e.filt.groupoid();
    const auto t = random_family(g, rng);
    for (int n = 1; n <= e.filt.depth(); ++n) {
      const auto k = e.filt.level(n);
      for (int trial = 0; trial < trials; ++trial) {
        ModuleVector f = ModuleVector::zeros(g), h = ModuleVector::zeros(g);
        const auto vals = random_function(g, rng);
        for (Elem x = 0; x < g->size(); ++x) {
          if (coin(rng)) {
            f.values[x] = vals[x];
          } else if (coin(rng)) {
            h.values[x] = vals[x];
          }
        }
        if (!is_K_separated(f, h, k)) continue;
        const auto step = step_function(f, e.filt, n);
        const double lhs = operator_norm(multiplication_operator(h) * t * multiplication_operator(f));
        c.le(lhs, commutator_defect(t, step) * sup_norm(f) * sup_norm(h) + 1e-12, at(e, trial));
        c.le(variation_of(step, e.filt, 1), 1.0 / n + 1e-15, at(e, trial) + " step variation");
      }
    }
  }
}

void metric_axioms(Check& c, Rng&, int) {
  for (const auto& e : standard_corpus()) {
    for (Elem x : e.filt.groupoid()->units()) {
      const auto fm = fibre_metric(e.filt, x);
      const std::size_t n = fm.members.size();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          c.expect(fm.d[i][j] == fm.d[j][i] && (fm.d[i][j] == 0) == (i == j), [&] { return e.name + ": symmetry or identity"; });
          for (std::size_t k = 0; k < n; ++k) {
            c.expect(fm.d[i][k] <= fm.d[i][j] + fm.d[j][k], [&] { return e.name + ": triangle inequality"; });
          }
        }
    }
  }
}

void geometry_bound(Check& c, Rng&, int) {
  for (const auto& e : standard_corpus()) {
    const auto s = geometry_stats(e.filt);
    for (std::size_t n = 0; n < s.max_ball.size(); ++n) {
      c.le(s.max_ball[n], s.range_bound[n], e.name + " level " + std::to_string(n));
    }
  }
}

void profile_monotone(Check& c, Rng& rng, int trials) {
  for (const auto& e : standard_corpus()) {
    for (int t = 0; t < std::max(1, trials / 10); ++t) {
      const auto fam = random_banded_family(e.filt, std::uniform_int_distribution<int>(0, e.filt.depth())(rng), rng);
      const auto p = propagation_profile(fam, e.filt);
      for (std::size_t n = 1; n < p.levels.size(); ++n) c.le(p.levels[n].upper, p.levels[n - 1].upper, at(e, t));
      c.expect(support_level(fam, e.filt) == support_level(fam.adjoint(), e.filt), [&] { return at(e, t) + ": adjoint support"; });
    }
  }
}

void density_positive(Check& c, Rng& rng, int trials) {
  for (const auto& e : standard_corpus()) {
    for (int t = 0; t < trials; ++t) {
      const auto h = witness_from_density(random_density(e.filt.groupoid(), rng));
      c.le(-is_positive_type(h.values()).min_eigenvalue, 1e-10, at(e, t));
    }
  }
}

void schur_contraction(Check& c, Rng& rng, int trials) {
  for (const auto& e : standard_corpus()) {
    for (int t = 0; t < 2 * trials; ++t) {
      const auto k = random_psd_kernel(e.filt.groupoid(), rng);
      const auto fam = random_family(e.filt.groupoid(), rng);
      c.le(operator_norm(schur(k, fam)), operator_norm(fam) + 1e-10, at(e, t));
    }
  }
}

void one_witness(Check& c, Rng&, int) {
  for (const auto& e : standard_corpus()) {
    const auto one = PositiveTypeFunction::certify(ModuleVector::constant(e.filt.groupoid(), 1.0));
    for (int n = 0; n <= e.filt.depth(); ++n) c.le(check_pt_witness(one, e.filt, n).epsilon, 0.0, e.name);
  }
}

void banded_kernel(Check& c, Rng& rng, int) {
  for (const auto& e : standard_corpus()) {
    const Groupoid& g = *e.filt.groupoid();
    for (int m = 0; m <= e.filt.depth(); ++m) {
      const auto k = kernel_from_function(random_banded_function(e.filt, m, rng));
      for (Elem x : g.units()) {
        const auto fm = fibre_metric(e.filt, x);
        const auto& blk = k.blocks[static_cast<std::size_t>(g.unit_slot(x))];
        for (std::size_t i = 0; i < fm.members.size(); ++i)
          for (std::size_t j = 0; j < fm.members.size(); ++j)
            if (fm.d[i][j] > m) {
              c.le(std::abs(blk(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))), 0.0,
                   e.name + " band " + std::to_string(m));
            }
      }
    }
  }
}

void certified_error(Check& c, Rng& rng, int trials) {
  for (const auto& e : standard_corpus()) {
    const auto& g = e.filt.groupoid();
    for (int t = 0; t < trials; ++t) {
      const auto fam = random_equivariant(g, rng);
      const auto a = approximate(fam, witness_from_density(random_density(g, rng)), e.filt);
      c.le(std::abs(operator_norm(lambda(a.approximant) - fam) - a.report.global_error), 1e-9, at(e, t));
      c.le(a.report.output_support_level, a.report.witness_support_level, at(e, t) + " support");
      c.expect(is_equivariant(lambda(a.approximant)).equivariant, [&] { return at(e, t) + ": approximant not equivariant"; });
    }
  }
}

void schur_identity(Check& c, Rng& rng, int trials) {
  for (const auto& e : standard_corpus()) {
    const auto& g = e.filt.groupoid();
    for (int t = 0; t < 2 * trials; ++t) {
      c.le(verify_schur_identity(random_equivariant(g, rng), random_function(g, rng)), 1e-10, at(e, t));
    }
  }
}

void modified_kernel_bound(Check& c, Rng& rng, int trials) {
  for (const auto& e : small_corpus()) {
    const auto& g = e.filt.groupoid();
    for (int t = 0; t < std::max(1, trials / 5); ++t) {
      const auto fam = random_equivariant(g, rng);
      const auto h = witness_from_density(random_density(g, rng));
      const double plain = approximate(fam, h, e.filt).report.global_error;
      const auto profile = propagation_profile(fam, e.filt);
      for (int n = 0; n <= e.filt.depth(); ++n) {
        const double mod = approximate(fam, h, e.filt, {1e-9, KernelMode::Modified, n}).report.global_error;
        c.le(mod, plain + 3 * profile.levels[static_cast<std::size_t>(n)].upper + 1e-10, at(e, t));
      }
    }
  }
}

void kappa_iota(Check& c, Rng&, int) {
  for (const auto& e : small_corpus()) {
    const auto& g = e.filt.groupoid();
    const auto sp = self_semidirect(g);
    for (Elem a = 0; a < g->size(); ++a) {
      const auto d = ModuleVector::delta(g, a);
      c.le(max_abs_diff(kappa(sp, iota(sp, d)), d), 0.0, e.name);
    }
  }
}

void theta_agreement(Check& c, Rng& rng, int trials) {
  for (const auto& e : small_corpus()) {
    const auto sp = self_semidirect(e.filt.groupoid());
    for (int t = 0; t < trials; ++t) {
      const auto f = random_function(sp.product, rng);
      const auto th = Theta(sp, lambda(f));
      c.le(max_entry_diff(th, theta(sp, f)), 1e-12, at(e, t));
      c.le(max_entry_diff(th, tube_rep(vartheta(sp, f))), 1e-12, at(e, t));
    }
  }
}

void theta_isometry(Check& c, Rng& rng, int trials) {
  for (const auto& e : small_corpus()) {
    const auto sp = self_semidirect(e.filt.groupoid());
    for (int t = 0; t < trials; ++t) {
      const auto fam = lambda(random_function(sp.product, rng));
      c.le(std::abs(operator_norm(Theta(sp, fam)) - operator_norm(fam)), 1e-9, at(e, t));
    }
  }
}

void slice_identity(Check& c, Rng& rng, int trials) {
  for (const auto& e : small_corpus()) {
    const auto& g = e.filt.groupoid();
    const auto sp = self_semidirect(g);
    for (int t = 0; t < trials; ++t) {
      const auto fam = lambda(random_function(sp.product, rng));
      const auto th = Theta(sp, fam);
      for (Elem x : g->units()) {
        c.le(max_abs_diff(th.blocks[static_cast<std::size_t>(g->unit_slot(x))], ad_slice(sp, fam, x)), 1e-12, at(e, t));
      }
    }
  }
}

void extension_round_trip(Check& c, Rng& rng, int trials) {
  for (const auto& e : small_corpus()) {
    const auto& g = e.filt.groupoid();
    const auto sp = self_semidirect(g);
    for (int t = 0; t < std::max(1, trials / 5); ++t) {
      const auto blocks = random_family(g, rng).blocks;
      const auto ext = extend_equivariant_family(sp, blocks);
      const auto eq = is_equivariant(ext);
      c.le(eq.defect, 1e-9, at(e, t) + " extension equivariance");
      for (Elem x : g->units()) {
        c.le(max_abs_diff(ad_slice(sp, ext, x), blocks[static_cast<std::size_t>(g->unit_slot(x))]), 0.0, at(e, t));
      }
      const auto fam = lambda(random_function(sp.product, rng));
      std::vector<Eigen::MatrixXcd> slices;
      for (Elem x : g->units()) slices.push_back(ad_slice(sp, fam, x));
      c.le(max_entry_diff(extend_equivariant_family(sp, slices), fam), 1e-12, at(e, t) + " round trip");
    }
  }
}

void transfer_gap(Check& c, Rng& rng, int trials) {
  for (const auto& e : small_corpus()) {
    const auto sp = self_semidirect(e.filt.groupoid());
    const auto lifted = lift_filtration(sp, e.filt);
    for (int t = 0; t < std::max(1, trials / 5); ++t) {
      const auto r = ql_transfer_check(sp, lambda(random_function(sp.product, rng)), e.filt, lifted);
      for (std::size_t n = 0; n < r.gap.size(); ++n) c.le(r.gap[n], 1e-10, at(e, t) + " level " + std::to_string(n));
    }
  }
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(std::uint64_t seed, int trials) {
  const std::vector<std::pair<std::string, CheckFn>> checks = {
      {"groupoid.partition", partition},
      {"groupoid.involution", involution},
      {"filtration.submultiplicative", submultiplicative},
      {"groupoid.simply_transitive", simply_transitive},
      {"module.star_homomorphism", star_homomorphism},
      {"module.cstar_identity", cstar_identity},
      {"module.cauchy_schwarz", cauchy_schwarz},
      {"module.convolver_round_trip", convolver_round_trip},
      {"module.apply_is_convolution", apply_is_convolution},
      {"quasilocality.separated_pairs", separated_pairs},
      {"quasilocality.step_function", step_function_bound},
      {"quasilocality.metric_axioms", metric_axioms},
      {"quasilocality.geometry_bound", geometry_bound},
      {"quasilocality.profile_monotone", profile_monotone},
      {"amenability.density_positive", density_positive},
      {"amenability.schur_contraction", schur_contraction},
      {"amenability.one_witness", one_witness},
      {"amenability.banded_kernel", banded_kernel},
      {"approximation.certified_error", certified_error},
      {"approximation.schur_identity", schur_identity},
      {"approximation.modified_kernel", modified_kernel_bound},
      {"semidirect.kappa_iota", kappa_iota},
      {"semidirect.theta_agreement", theta_agreement},
      {"semidirect.theta_isometry", theta_isometry},
      {"semidirect.slice_identity", slice_identity},
      {"semidirect.extension", extension_round_trip},
      {"semidirect.transfer_gap", transfer_gap},
  };
  std::vector<CheckResult> out;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    Check c(checks[i].first);
    Rng rng(seed ^ (0x9e3779b97f4a7c15ULL * (i + 1)));
    try {
      checks[i].second(c, rng, trials);
    } catch (const std::exception& ex) {
      c.expect(false, [&] { return std::string("threw: ") + ex.what(); });
    }
    out.push_back(c.result());
  }
  return out;
}

}  // namespace gql
