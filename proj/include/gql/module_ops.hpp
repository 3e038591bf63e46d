#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gql/groupoid.hpp"
#include "gql/linalg.hpp"

namespace gql {

/// Complex function on G; doubles as an element of C_c(G) and of L^2(G).
struct ModuleVector {
  GroupoidPtr groupoid;
  Eigen::VectorXcd values;

  static ModuleVector zeros(GroupoidPtr g);
  static ModuleVector constant(GroupoidPtr g, Complex c);
  static ModuleVector delta(GroupoidPtr g, Elem e);
  static ModuleVector units_indicator(GroupoidPtr g);

  Complex operator[](Elem e) const { return values[e]; }
  Complex& operator[](Elem e) { return values[e]; }
  /// Restriction to the source fibre with the given unit slot.
  Eigen::VectorXcd restrict_to(int slot) const;
};

/// One matrix per unit (aligned with Groupoid::units()), indexed by the source fibre.
struct FibreOperatorFamily {
  GroupoidPtr groupoid;
  std::vector<Eigen::MatrixXcd> blocks;

  static FibreOperatorFamily zeros(GroupoidPtr g);
  static FibreOperatorFamily identity(GroupoidPtr g);

  FibreOperatorFamily adjoint() const;
};

FibreOperatorFamily operator*(const FibreOperatorFamily& a, const FibreOperatorFamily& b);
FibreOperatorFamily operator+(const FibreOperatorFamily& a, const FibreOperatorFamily& b);
FibreOperatorFamily operator-(const FibreOperatorFamily& a, const FibreOperatorFamily& b);
ModuleVector operator+(const ModuleVector& a, const ModuleVector& b);
ModuleVector operator-(const ModuleVector& a, const ModuleVector& b);
ModuleVector operator*(Complex c, const ModuleVector& a);

/// Throws Error(GroupoidMismatch) unless both refer to the same groupoid.
void require_same(const GroupoidPtr& a, const GroupoidPtr& b, const char* what);
/// Throws Error(DimensionMismatch) when block shapes do not match the fibres.
void check_shape(const FibreOperatorFamily& t);

/// sup over units of the l^2 norm on G_x.
double module_norm(const ModuleVector& v);
double sup_norm(const ModuleVector& v);
ModuleVector pointwise(const ModuleVector& a, const ModuleVector& b);

/// (f*g)(γ) = Σ_{α ∈ G_{s(γ)}} f(γα^{-1}) g(α).
ModuleVector convolve(const ModuleVector& f, const ModuleVector& g);
/// f*(γ) = conj f(γ^{-1}).
ModuleVector star(const ModuleVector& f);
/// <η,ξ>(x) = Σ_{γ ∈ G_x} conj η(γ) ξ(γ); one value per unit slot.
std::vector<Complex> inner_product(const ModuleVector& eta, const ModuleVector& xi);

/// Regular representation: entry (γ,α) of block x is f(γα^{-1}).
FibreOperatorFamily lambda(const ModuleVector& f);
double reduced_norm(const ModuleVector& f);
double operator_norm(const FibreOperatorFamily& t);
std::vector<double> fibre_norms(const FibreOperatorFamily& t);

ModuleVector apply(const FibreOperatorFamily& t, const ModuleVector& xi);
/// Right regular action ρ(g)ξ = ξ * g.
ModuleVector rho_apply(const ModuleVector& g, const ModuleVector& xi);
FibreOperatorFamily multiplication_operator(const ModuleVector& g);

/// V_γ : l^2(G_{s(γ)}) -> l^2(G_{r(γ)}), (V_γ v)(γ') = v(γ'γ).
/// Throws Error(IndexMismatch) when v does not have |G_{s(γ)}| entries.
Eigen::VectorXcd translate(const Groupoid& g, Elem gamma, const Eigen::VectorXcd& v);
/// Permutation matrix of V_γ.
Eigen::MatrixXd translation_matrix(const Groupoid& g, Elem gamma);

struct EquivarianceCheck {
  bool equivariant = false;
  double defect = 0.0;  // max_γ ||V_γ T_{s(γ)} - T_{r(γ)} V_γ||
};

EquivarianceCheck is_equivariant(const FibreOperatorFamily& t, double tol = 1e-9);

/// f_T(γ) = (T_{s(γ)} δ_{s(γ)})(γ). Throws Error(NotEquivariant) with the defect.
ModuleVector extract_convolver(const FibreOperatorFamily& t, double tol = 1e-9);

/// max entrywise |A_x - B_x| over fibres.
double max_entry_diff(const FibreOperatorFamily& a, const FibreOperatorFamily& b);
double max_abs_diff(const ModuleVector& a, const ModuleVector& b);

}  // namespace gql
