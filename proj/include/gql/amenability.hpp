#pragma once

#include <span>
#include <string>
#include <vector>

#include "gql/filtration.hpp"
#include "gql/module_ops.hpp"

namespace gql {

inline constexpr double kPsdTol = 1e-10;

struct PositiveTypeCheck {
  bool positive = false;
  double min_eigenvalue = 0.0;
  std::vector<double> per_unit;  // min eigenvalue of each fibre Gram matrix
  double hermitian_defect = 0.0;
};

/// Gram matrices [h(γ_i γ_j^{-1})] over full fibres; must be Hermitian and PSD up to kPsdTol.
PositiveTypeCheck is_positive_type(const ModuleVector& h);

/// A function together with its positive-type certificate.
class PositiveTypeFunction {
 public:
  /// Throws Error(NotPositiveType) with the minimum eigenvalue as defect.
  static PositiveTypeFunction certify(ModuleVector h);

  const ModuleVector& values() const { return h_; }
  const std::vector<double>& certificate() const { return cert_; }

 private:
  PositiveTypeFunction(ModuleVector h, std::vector<double> cert) : h_(std::move(h)), cert_(std::move(cert)) {}
  ModuleVector h_;
  std::vector<double> cert_;
};

struct WitnessReport {
  int level = 0;             // n
  double epsilon = 0.0;      // variation achieved on K_n
  double mass_defect = 0.0;  // sup_{γ in K_n} |1 - Σ_{β in G_{r(γ)}} f(β)|
  int support_level = 0;     // m
  std::vector<Elem> unit_violations;
};

/// Følner-type witness f >= 0: mass and translation variation over γ in K_n.
/// Throws Error(NegativeValues).
WitnessReport check_witness(const ModuleVector& f, const Filtration& filt, int n);

/// epsilon = max_{γ in K_n} |1 - h(γ)|; units with h(x) > 1 or h(x) != 1 are listed.
WitnessReport check_pt_witness(const PositiveTypeFunction& h, const Filtration& filt, int n);
/// Certifies first; throws Error(NotPositiveType).
WitnessReport check_pt_witness(const ModuleVector& h, const Filtration& filt, int n);

/// h(γ) = Σ_{β in G_{r(γ)}} g(β) g(βγ). Throws NegativeValues, MassExceeded.
PositiveTypeFunction witness_from_density(const ModuleVector& g);

/// g = indicator of K_m on each fibre, normalised to unit l^2 mass.
ModuleVector ball_density(const Filtration& filt, int m);

/// Pair groupoid on `points` (in path order): on the fibre over points[j], the indicator
/// of a width-w window around j clamped into the path, normalised.
ModuleVector window_density(const GroupoidPtr& g, std::span<const std::string> points, int w);

struct KernelFamily {
  GroupoidPtr groupoid;
  std::vector<Eigen::MatrixXcd> blocks;
};

/// k_x(γ,β) = h(γβ^{-1}).
KernelFamily kernel_from_function(const ModuleVector& h);

/// k_x(γ,β) = h(γβ^{-1}) when r(γ), r(β) are in r(K), δ_{γβ} otherwise.
KernelFamily modified_kernel(const ModuleVector& h, std::span<const Elem> k);
/// The same with K = K_ñ. Since K_ñ contains the units, r(K_ñ) is the whole unit
/// space and this coincides with kernel_from_function.
KernelFamily modified_kernel(const ModuleVector& h, const Filtration& filt, int level);

/// Entrywise product per fibre. Throws Error(DimensionMismatch).
FibreOperatorFamily schur(const KernelFamily& k, const FibreOperatorFamily& t);

}  // namespace gql
