#pragma once

#include <string>
#include <vector>

#include "gql/amenability.hpp"
#include "gql/filtration.hpp"
#include "gql/module_ops.hpp"

namespace gql {

enum class KernelMode { Standard, Modified };

struct ApproximationOptions {
  double tol = 1e-9;  // equivariance tolerance
  KernelMode kernel = KernelMode::Standard;
  int modified_level = 0;  // ñ, used with KernelMode::Modified
};

struct ApproximationReport {
  std::vector<double> per_unit_error;  // ||m_{k_x}(T_x) - T_x||
  double global_error = 0.0;
  double identity_residual = 0.0;  // max |m_{k_x}(T_x) - λ_x(h f_T)|
  int output_support_level = 0;
  int witness_support_level = 0;
};

struct Approximation {
  ModuleVector approximant;  // h · f_T
  ApproximationReport report;
};

/// Schur-multiplier approximation of an equivariant family. Throws NotEquivariant.
Approximation approximate(const FibreOperatorFamily& t, const PositiveTypeFunction& h, const Filtration& filt,
                          const ApproximationOptions& options = {});

/// max entrywise |m_{k_x}(T_x) - λ_x(h f_T)|. Throws NotEquivariant.
double verify_schur_identity(const FibreOperatorFamily& t, const ModuleVector& h, double tol = 1e-9);

struct NamedWitness {
  std::string id;
  PositiveTypeFunction h;
};

struct SweepRow {
  std::string id;
  int support_level = 0;
  double epsilon = 0.0;  // |1 - h| on K_n
  double global_error = 0.0;
};

/// One row per witness, in the given order.
std::vector<SweepRow> error_sweep(const FibreOperatorFamily& t, const std::vector<NamedWitness>& witnesses,
                                  const Filtration& filt, int n, const ApproximationOptions& options = {});

}  // namespace gql
