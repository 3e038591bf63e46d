#pragma once

#include <string>
#include <vector>

#include "gql/filtration.hpp"
#include "gql/module_ops.hpp"
#include "gql/quasilocality.hpp"

namespace gql {

/// Left action of G on a finite space Y with anchor p : Y -> units.
/// act[γ][y] is the index of γy, or -1 when s(γ) != p(y).
struct GroupoidAction {
  GroupoidPtr base;
  std::vector<std::string> space;
  std::vector<Elem> anchor;
  std::vector<std::vector<int>> act;
};

/// Throws Error(NotAnAction) naming the failed law.
void validate_action(const GroupoidAction& a);

/// G acting on (G, r) by left multiplication.
GroupoidAction multiplication_action(GroupoidPtr g);
/// G acting on its unit space, γ s(γ) = r(γ).
GroupoidAction unit_space_action(GroupoidPtr g);

/// Y ⋊ G with elements "(y,γ)" where p(y) = r(γ); (y,γ)(γ^{-1}y, γ') = (y, γγ').
struct SemidirectProduct {
  GroupoidAction action;
  GroupoidPtr product;
  std::vector<int> point_of;  // product element -> y
  std::vector<Elem> arrow_of;  // product element -> γ
  std::vector<std::vector<Elem>> element;  // [y][γ] -> product element, kUndefined off the domain

  Elem at(int y, Elem gamma) const { return element[static_cast<std::size_t>(y)][static_cast<std::size_t>(gamma)]; }
};

SemidirectProduct semidirect_product(const GroupoidAction& action);

/// G ⋊ G for the multiplication action; Y = G, so points are indexed by elements of G.
SemidirectProduct self_semidirect(GroupoidPtr g);

/// Function on {(γ,α) : s(γ) = s(α)}, stored per source unit in fibre order.
struct TubeFunction {
  GroupoidPtr groupoid;
  std::vector<Eigen::MatrixXcd> blocks;

  Complex operator()(Elem gamma, Elem alpha) const;
};

/// [𝒯 f]_{γ,α} = f(γ,α).
FibreOperatorFamily tube_rep(const TubeFunction& f);
/// Inverse of tube_rep: f(γ,α) = <δ_γ, T_x δ_α>.
TubeFunction tube_from_family(const FibreOperatorFamily& t);

/// ϑ(f)(γ,α) = f((γ, γα^{-1})). Throws Error(DomainMismatch) unless f lives on sp.product.
TubeFunction vartheta(const SemidirectProduct& sp, const ModuleVector& f);
/// θ = 𝒯 ∘ ϑ.
FibreOperatorFamily theta(const SemidirectProduct& sp, const ModuleVector& f);

/// (ιξ)((y,γ)) = ξ(γ).
ModuleVector iota(const SemidirectProduct& sp, const ModuleVector& xi);
/// (κη)(γ) = η((γ,γ)).
ModuleVector kappa(const SemidirectProduct& sp, const ModuleVector& eta);

/// Θ(T) = κ T ι, assembled column by column. Throws NotEquivariant.
FibreOperatorFamily Theta(const SemidirectProduct& sp, const FibreOperatorFamily& t, double tol = 1e-9);

/// Ad_x(T_x): entry (γ,α) is T_x[(γ,γ),(α,α)] on the product fibre over the G-unit x.
/// Throws NotAUnit.
Eigen::MatrixXcd ad_slice(const SemidirectProduct& sp, const FibreOperatorFamily& t, Elem x);

/// Equivariant family on G ⋊ G with Ad_x(T_x) = blocks[x]: T_z = V_{(z,z)} T_{s(z)} V_{(z,z)}^*.
FibreOperatorFamily extend_equivariant_family(const SemidirectProduct& sp, const std::vector<Eigen::MatrixXcd>& blocks);

/// K̃_n = {(y,γ) : γ in K_n}.
Filtration lift_filtration(const SemidirectProduct& sp, const Filtration& filt);

struct TransferReport {
  PropagationProfile base;      // profile of (Ad_x T_x)_x on G
  PropagationProfile product;   // profile of T on G ⋊ G
  std::vector<double> gap;      // distance between the two brackets per level
  int base_support_level = 0;
  int product_support_level = 0;
};

TransferReport ql_transfer_check(const SemidirectProduct& sp, const FibreOperatorFamily& t, const Filtration& filt_g,
                                 const Filtration& filt_product, int exact_limit = kDefaultExactLimit,
                                 double tol = 1e-9);

}  // namespace gql
