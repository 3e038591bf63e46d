#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gql {

/// Elements are addressed by their position in the lexicographically sorted id list.
using Elem = int;

inline constexpr Elem kUndefined = -1;

struct Fibre {
  Elem base = kUndefined;
  std::vector<Elem> members;  // ascending, hence lexicographic on ids

  std::size_t size() const { return members.size(); }
};

/// Raw tables for a groupoid, before validation. Element indices refer to `names`.
/// `compose` is row-major |G| x |G|, entry kUndefined where the product is not defined.
struct GroupoidTables {
  std::vector<std::string> names;
  std::vector<bool> is_unit;
  std::vector<Elem> src;
  std::vector<Elem> rng;
  std::vector<Elem> inv;
  std::vector<Elem> compose;
};

/// Explicit description as it appears in a description document.
struct ExplicitDescription {
  std::vector<std::string> elements;
  std::vector<std::string> units;
  std::map<std::string, std::string> src;
  std::map<std::string, std::string> rng;
  std::map<std::string, std::string> inv;
  std::vector<std::array<std::string, 3>> compose;  // (a, b, a*b)
};

/// Multiplication table of a finite group; table[i][j] names elements[i] * elements[j].
struct GroupTable {
  std::vector<std::string> elements;
  std::vector<std::vector<std::string>> table;
};

class Groupoid;
using GroupoidPtr = std::shared_ptr<const Groupoid>;

/// Finite groupoid with discrete topology. Immutable after construction; the
/// composition is stored as a dense table.
class Groupoid {
 public:
  /// Sorts the element ids, re-indexes the tables and validates every axiom.
  /// Throws Error(AxiomViolation) naming the first failed axiom and its witnesses.
  static GroupoidPtr from_tables(GroupoidTables tables);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(Elem e) const { return names_.at(static_cast<std::size_t>(e)); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<Elem> find(std::string_view id) const;
  /// Throws Error(DomainMismatch) for an unknown id.
  Elem index_of(std::string_view id) const;

  Elem src(Elem e) const { return src_[static_cast<std::size_t>(e)]; }
  Elem rng(Elem e) const { return rng_[static_cast<std::size_t>(e)]; }
  Elem inv(Elem e) const { return inv_[static_cast<std::size_t>(e)]; }
  /// kUndefined unless src(a) == rng(b).
  Elem compose(Elem a, Elem b) const {
    return compose_[static_cast<std::size_t>(a) * names_.size() + static_cast<std::size_t>(b)];
  }
  bool composable(Elem a, Elem b) const { return src(a) == rng(b); }

  bool is_unit(Elem e) const { return unit_slot_[static_cast<std::size_t>(e)] >= 0; }
  const std::vector<Elem>& units() const { return units_; }
  int unit_count() const { return static_cast<int>(units_.size()); }
  /// Position of `unit` in units(); -1 when `e` is not a unit.
  int unit_slot(Elem e) const { return unit_slot_[static_cast<std::size_t>(e)]; }

  /// Fibres are aligned with units(): fibres()[k] is the source fibre of units()[k].
  const std::vector<Fibre>& fibres() const { return fibres_; }
  const Fibre& fibre_of_slot(int slot) const { return fibres_.at(static_cast<std::size_t>(slot)); }
  /// Position of `e` inside the source fibre of src(e).
  int fibre_position(Elem e) const { return fibre_pos_[static_cast<std::size_t>(e)]; }

  bool operator==(const Groupoid& other) const;

 private:
  Groupoid() = default;

  std::vector<std::string> names_;
  std::unordered_map<std::string, Elem> index_;
  std::vector<Elem> src_, rng_, inv_, compose_;
  std::vector<Elem> units_;
  std::vector<int> unit_slot_;
  std::vector<Fibre> fibres_;
  std::vector<int> fibre_pos_;
};

/// True when both pointers refer to the same groupoid, or to structurally equal ones.
bool same_groupoid(const GroupoidPtr& a, const GroupoidPtr& b);

GroupoidPtr build_groupoid(const ExplicitDescription& spec);

/// Pair groupoid X x X with ids "(a,b)"; src((a,b)) = (b,b), rng((a,b)) = (a,a).
GroupoidPtr pair_groupoid(std::span<const std::string> points);
std::string pair_id(std::string_view a, std::string_view b);

/// Group viewed as a one-unit groupoid. Throws Error(NotAGroup).
GroupoidPtr group_groupoid(const GroupTable& table);

/// Transformation groupoid X x Gamma with ids "(x,g)"; src((x,g)) = g^{-1}x, rng((x,g)) = x.
/// `action[i][j]` names elements[i] . space[j]. Throws Error(NotAnAction).
GroupoidPtr transformation_groupoid(std::span<const std::string> space, const GroupTable& group,
                                    const std::vector<std::vector<std::string>>& action);

/// Throws Error(NotAUnit) unless `x` is a unit.
const Fibre& source_fibre(const Groupoid& g, Elem x);

/// Elements with range `y`, ascending.
std::vector<Elem> range_fibre(const Groupoid& g, Elem y);

bool is_bisection(const Groupoid& g, std::span<const Elem> subset);

/// (s, r) injective.
bool is_principal(const Groupoid& g);
/// (s, r) onto units x units.
bool is_transitive(const Groupoid& g);

/// Products A.B = {ab : a in A, b in B composable}; ascending, no duplicates.
std::vector<Elem> product_set(const Groupoid& g, std::span<const Elem> a, std::span<const Elem> b);
std::vector<Elem> inverse_set(const Groupoid& g, std::span<const Elem> a);
bool is_symmetric(const Groupoid& g, std::span<const Elem> a);

/// Resolves a list of ids; throws Error(DomainMismatch) on unknown ids.
std::vector<Elem> resolve(const Groupoid& g, std::span<const std::string> ids);

}  // namespace gql
