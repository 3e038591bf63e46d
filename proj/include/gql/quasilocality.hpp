#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "gql/filtration.hpp"
#include "gql/module_ops.hpp"

namespace gql {

inline constexpr double kEntryTol = 1e-12;
inline constexpr int kDefaultExactLimit = 14;

enum class ProfileMethod { Exact, Bracketed };
std::string_view to_string(ProfileMethod m);

struct ProfileEntry {
  double lower = 0.0;
  double upper = 0.0;
  ProfileMethod method = ProfileMethod::Exact;
};

/// Level n entry brackets sup_x sup_{A,B} ||χ_A T_x χ_B|| over pairs with d_x(a,b) > n.
struct PropagationProfile {
  std::vector<ProfileEntry> levels;
};

struct FibreMetric {
  Elem base = kUndefined;
  std::vector<Elem> members;
  std::vector<std::vector<int>> d;
};

struct GeometryStats {
  std::vector<int> max_ball;     // max_{x, γ in G_x} |B(γ, n)|
  std::vector<int> range_bound;  // max_y |G^y ∩ K_n|
};

/// Supports are the entries with |f| > kEntryTol. K must be symmetric for the
/// two one-sided conditions to coincide; both are checked regardless.
bool is_K_separated(const ModuleVector& f, const ModuleVector& g, std::span<const Elem> k);

/// Least n such that every entry with |T_{γ,α}| > kEntryTol has γα^{-1} in K_n.
int support_level(const FibreOperatorFamily& t, const Filtration& filt);
/// Least n with supp(f) in K_n.
int function_support_level(const ModuleVector& f, const Filtration& filt);

/// Exact enumeration of separated blocks on fibres with at most exact_limit elements,
/// certified bracket otherwise.
PropagationProfile propagation_profile(const FibreOperatorFamily& t, const Filtration& filt,
                                       int exact_limit = kDefaultExactLimit);

/// Per level, sup_x sup_{A,B} ||χ_A T_x χ_B ξ|_{G_x}||; same enumeration policy.
PropagationProfile vector_ql_profile(const FibreOperatorFamily& t, const ModuleVector& xi, const Filtration& filt,
                                     int exact_limit = kDefaultExactLimit);

/// d_x(γ1,γ2) = least n with γ1γ2^{-1} in K_n. Throws NotAUnit.
FibreMetric fibre_metric(const Filtration& filt, Elem x);
GeometryStats geometry_stats(const Filtration& filt);

/// max |h(α) - h(β)| over s(α) = s(β) with αβ^{-1} in K_n.
double variation_of(const ModuleVector& h, const Filtration& filt, int n);

/// ||T M(h) - M(h) T||.
double commutator_defect(const FibreOperatorFamily& t, const ModuleVector& h);

/// On each fibre meeting supp f: h(γ) = 1 - min(d_x(γ, supp f), n) / n, a step function with
/// values i/n, equal to 1 on supp f, 0 at distance >= n from it, and of variation 1/n on K_1.
/// Fibres missing supp f get 0. Throws InvalidConfig for n < 1.
ModuleVector step_function(const ModuleVector& f, const Filtration& filt, int n);

/// Norm of χ_A T_x χ_B for the given fibre positions.
double block_norm(const Eigen::MatrixXcd& t, std::span<const int> rows, std::span<const int> cols);

}  // namespace gql
