#include "gql/approximation.hpp"

#include <algorithm>

#include "gql/error.hpp"
#include "gql/parallel.hpp"
#include "gql/quasilocality.hpp"

namespace gql {

Approximation approximate(const FibreOperatorFamily& t, const PositiveTypeFunction& h, const Filtration& filt,
                          const ApproximationOptions& options) {
  require_same(t.groupoid, h.values().groupoid, "approximate");
  require_same(t.groupoid, filt.groupoid(), "approximate");
  const ModuleVector f_t = extract_convolver(t, options.tol);
  Approximation out{pointwise(h.values(), f_t), {}};

  const KernelFamily k = options.kernel == KernelMode::Modified
                             ? modified_kernel(h.values(), filt, options.modified_level)
                             : kernel_from_function(h.values());
  const FibreOperatorFamily multiplied = schur(k, t);
  const FibreOperatorFamily realised = lambda(out.approximant);

  auto& r = out.report;
  r.per_unit_error.assign(t.blocks.size(), 0.0);
  parallel_for(t.blocks.size(), [&](std::size_t i) {
    r.per_unit_error[i] = spectral_norm(multiplied.blocks[i] - t.blocks[i]);
  });
  r.global_error = r.per_unit_error.empty() ? 0.0 : *std::max_element(r.per_unit_error.begin(), r.per_unit_error.end());
  r.identity_residual = max_entry_diff(multiplied, realised);
  r.output_support_level = function_support_level(out.approximant, filt);
  r.witness_support_level = function_support_level(h.values(), filt);
  return out;
}

double verify_schur_identity(const FibreOperatorFamily& t, const ModuleVector& h, double tol) {
  require_same(t.groupoid, h.groupoid, "verify_schur_identity");
  const ModuleVector f_t = extract_convolver(t, tol);
  return max_entry_diff(schur(kernel_from_function(h), t), lambda(pointwise(h, f_t)));
}

std::vector<SweepRow> error_sweep(const FibreOperatorFamily& t, const std::vector<NamedWitness>& witnesses,
                                  const Filtration& filt, int n, const ApproximationOptions& options) {
  std::vector<SweepRow> rows;
  rows.reserve(witnesses.size());
  for (const auto& w : witnesses) {
    const auto a = approximate(t, w.h, filt, options);
    const auto rep = check_pt_witness(w.h, filt, n);
    rows.push_back({w.id, rep.support_level, rep.epsilon, a.report.global_error});
  }
  return rows;
}

}  // namespace gql
