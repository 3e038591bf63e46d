#include "gql/groupoid.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "gql/error.hpp"

namespace gql {

namespace {

[[noreturn]] void axiom(const std::string& what) { throw Error(ErrorKind::AxiomViolation, what); }

std::string q(const std::string& s) { return "'" + s + "'"; }

void check_table_shapes(const GroupoidTables& t) {
  const std::size_t n = t.names.size();
  if (n == 0) throw Error(ErrorKind::EmptySet, "groupoid has no elements");
  if (t.is_unit.size() != n || t.src.size() != n || t.rng.size() != n || t.inv.size() != n ||
      t.compose.size() != n * n) {
    axiom("table sizes do not match the element count");
  }
  std::set<std::string> seen;
  for (const auto& name : t.names) {
    if (!seen.insert(name).second) axiom("duplicate element id " + q(name));
  }
  auto in_range = [n](Elem e) { return e >= 0 && static_cast<std::size_t>(e) < n; };
  for (std::size_t i = 0; i < n; ++i) {
    if (!in_range(t.src[i]) || !in_range(t.rng[i]) || !in_range(t.inv[i])) {
      axiom("src/rng/inv of " + q(t.names[i]) + " is not an element");
    }
  }
  for (Elem c : t.compose) {
    if (c != kUndefined && !in_range(c)) axiom("composition table refers to an unknown element");
  }
}

}  // namespace

GroupoidPtr Groupoid::from_tables(GroupoidTables t) {
  check_table_shapes(t);
  const std::size_t n = t.names.size();

  // Re-index so that element order is lexicographic on ids.
  std::vector<Elem> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Elem a, Elem b) { return t.names[a] < t.names[b]; });
  std::vector<Elem> new_of(n);
  for (std::size_t i = 0; i < n; ++i) new_of[order[i]] = static_cast<Elem>(i);
  auto remap = [&](Elem e) { return e == kUndefined ? kUndefined : new_of[e]; };

  auto g = std::shared_ptr<Groupoid>(new Groupoid());
  g->names_.resize(n);
  g->src_.resize(n);
  g->rng_.resize(n);
  g->inv_.resize(n);
  g->compose_.assign(n * n, kUndefined);
  std::vector<bool> unit(n);
  for (std::size_t old = 0; old < n; ++old) {
    const auto i = static_cast<std::size_t>(new_of[old]);
    g->names_[i] = t.names[old];
    g->src_[i] = remap(t.src[old]);
    g->rng_[i] = remap(t.rng[old]);
    g->inv_[i] = remap(t.inv[old]);
    unit[i] = t.is_unit[old];
    for (std::size_t b = 0; b < n; ++b) {
      g->compose_[i * n + static_cast<std::size_t>(new_of[b])] = remap(t.compose[old * n + b]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) g->index_.emplace(g->names_[i], static_cast<Elem>(i));

  g->unit_slot_.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (unit[i]) {
      g->unit_slot_[i] = static_cast<int>(g->units_.size());
      g->units_.push_back(static_cast<Elem>(i));
    }
  }
  if (g->units_.empty()) axiom("no units");

  const auto& nm = g->names_;
  // Units are fixed by src and rng; src/rng land in units.
  for (std::size_t i = 0; i < n; ++i) {
    const Elem e = static_cast<Elem>(i);
    if (!g->is_unit(g->src(e))) axiom("src(" + q(nm[i]) + ") = " + q(nm[g->src(e)]) + " is not a unit");
    if (!g->is_unit(g->rng(e))) axiom("rng(" + q(nm[i]) + ") = " + q(nm[g->rng(e)]) + " is not a unit");
    if (g->is_unit(e) && (g->src(e) != e || g->rng(e) != e)) {
      axiom("unit " + q(nm[i]) + " does not satisfy src(x) = rng(x) = x");
    }
  }
  // Composability law and range/source of products.
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const Elem ea = static_cast<Elem>(a), eb = static_cast<Elem>(b);
      const Elem c = g->compose(ea, eb);
      const bool composable = g->src(ea) == g->rng(eb);
      if (c != kUndefined && !composable) {
        axiom("compose(" + q(nm[a]) + ", " + q(nm[b]) + ") is defined but src(" + q(nm[a]) + ") != rng(" +
              q(nm[b]) + ")");
      }
      if (c == kUndefined && composable) {
        axiom("compose(" + q(nm[a]) + ", " + q(nm[b]) + ") is undefined although the pair is composable");
      }
      if (c != kUndefined && (g->src(c) != g->src(eb) || g->rng(c) != g->rng(ea))) {
        axiom("product " + q(nm[c]) + " of " + q(nm[a]) + " and " + q(nm[b]) + " has the wrong source or range");
      }
    }
  }
  // Unit laws and inverses.
  for (std::size_t i = 0; i < n; ++i) {
    const Elem e = static_cast<Elem>(i);
    if (g->compose(g->rng(e), e) != e || g->compose(e, g->src(e)) != e) {
      axiom("unit law fails at " + q(nm[i]));
    }
    const Elem v = g->inv(e);
    if (g->inv(v) != e) axiom("inv(inv(" + q(nm[i]) + ")) != " + q(nm[i]));
    if (g->src(v) != g->rng(e) || g->rng(v) != g->src(e)) {
      axiom("inv(" + q(nm[i]) + ") does not swap src and rng");
    }
    if (g->compose(e, v) != g->rng(e) || g->compose(v, e) != g->src(e)) {
      axiom(q(nm[i]) + " composed with its inverse is not a unit");
    }
  }
  // Associativity over composable triples.
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const Elem ab = g->compose(static_cast<Elem>(a), static_cast<Elem>(b));
      if (ab == kUndefined) continue;
      for (std::size_t c = 0; c < n; ++c) {
        const Elem bc = g->compose(static_cast<Elem>(b), static_cast<Elem>(c));
        if (bc == kUndefined) continue;
        if (g->compose(ab, static_cast<Elem>(c)) != g->compose(static_cast<Elem>(a), bc)) {
          axiom("associativity fails on (" + q(nm[a]) + ", " + q(nm[b]) + ", " + q(nm[c]) + ")");
        }
      }
    }
  }

  g->fibres_.resize(g->units_.size());
  g->fibre_pos_.assign(n, -1);
  for (std::size_t k = 0; k < g->units_.size(); ++k) g->fibres_[k].base = g->units_[k];
  for (std::size_t i = 0; i < n; ++i) {
    auto& fibre = g->fibres_[static_cast<std::size_t>(g->unit_slot(g->src(static_cast<Elem>(i))))];
    g->fibre_pos_[i] = static_cast<int>(fibre.members.size());
    fibre.members.push_back(static_cast<Elem>(i));
  }
  return g;
}

std::optional<Elem> Groupoid::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Elem Groupoid::index_of(std::string_view id) const {
  auto e = find(id);
  if (!e) throw Error(ErrorKind::DomainMismatch, "unknown element id '" + std::string(id) + "'");
  return *e;
}

bool Groupoid::operator==(const Groupoid& other) const {
  return names_ == other.names_ && src_ == other.src_ && rng_ == other.rng_ && inv_ == other.inv_ &&
         compose_ == other.compose_ && units_ == other.units_;
}

bool same_groupoid(const GroupoidPtr& a, const GroupoidPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

GroupoidPtr build_groupoid(const ExplicitDescription& spec) {
  GroupoidTables t;
  t.names = spec.elements;
  const std::size_t n = t.names.size();
  if (n == 0) throw Error(ErrorKind::EmptySet, "no elements");
  std::unordered_map<std::string, Elem> idx;
  for (std::size_t i = 0; i < n; ++i) {
    if (!idx.emplace(t.names[i], static_cast<Elem>(i)).second) {
      throw Error(ErrorKind::AxiomViolation, "duplicate element id '" + t.names[i] + "'");
    }
  }
  auto lookup = [&](const std::string& id, const std::string& field) {
    auto it = idx.find(id);
    if (it == idx.end()) {
      throw Error(ErrorKind::AxiomViolation, field + " refers to unknown element '" + id + "'");
    }
    return it->second;
  };
  t.is_unit.assign(n, false);
  for (const auto& u : spec.units) t.is_unit[lookup(u, "units")] = true;
  auto table = [&](const std::map<std::string, std::string>& m, const std::string& field) {
    std::vector<Elem> out(n, kUndefined);
    for (const auto& [k, v] : m) out[lookup(k, field)] = lookup(v, field);
    for (std::size_t i = 0; i < n; ++i) {
      if (out[i] == kUndefined) {
        throw Error(ErrorKind::AxiomViolation, field + " is missing an entry for '" + t.names[i] + "'");
      }
    }
    return out;
  };
  t.src = table(spec.src, "src");
  t.rng = table(spec.rng, "rng");
  t.inv = table(spec.inv, "inv");
  t.compose.assign(n * n, kUndefined);
  for (const auto& [a, b, c] : spec.compose) {
    const auto ia = lookup(a, "compose"), ib = lookup(b, "compose");
    auto& slot = t.compose[static_cast<std::size_t>(ia) * n + static_cast<std::size_t>(ib)];
    const Elem ic = lookup(c, "compose");
    if (slot != kUndefined && slot != ic) {
      throw Error(ErrorKind::AxiomViolation, "compose('" + a + "', '" + b + "') listed twice with different values");
    }
    slot = ic;
  }
  return Groupoid::from_tables(std::move(t));
}

std::string pair_id(std::string_view a, std::string_view b) {
  std::string out;
  out.reserve(a.size() + b.size() + 3);
  out += '(';
  out += a;
  out += ',';
  out += b;
  out += ')';
  return out;
}

GroupoidPtr pair_groupoid(std::span<const std::string> points) {
  if (points.empty()) throw Error(ErrorKind::EmptySet, "pair groupoid needs at least one point");
  std::set<std::string> distinct(points.begin(), points.end());
  if (distinct.size() != points.size()) throw Error(ErrorKind::AxiomViolation, "duplicate points");
  const std::size_t m = points.size();
  const std::size_t n = m * m;
  auto id = [m](std::size_t a, std::size_t b) { return static_cast<Elem>(a * m + b); };
  GroupoidTables t;
  t.names.resize(n);
  t.is_unit.assign(n, false);
  t.src.resize(n);
  t.rng.resize(n);
  t.inv.resize(n);
  t.compose.assign(n * n, kUndefined);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      const auto e = static_cast<std::size_t>(id(a, b));
      t.names[e] = pair_id(points[a], points[b]);
      t.is_unit[e] = a == b;
      t.src[e] = id(b, b);
      t.rng[e] = id(a, a);
      t.inv[e] = id(b, a);
      for (std::size_t c = 0; c < m; ++c) t.compose[e * n + static_cast<std::size_t>(id(b, c))] = id(a, c);
    }
  }
  return Groupoid::from_tables(std::move(t));
}

namespace {

struct IndexedGroup {
  std::vector<std::string> names;
  std::vector<std::vector<int>> mul;
  int identity = -1;
  std::vector<int> inverse;
};

IndexedGroup index_group(const GroupTable& table) {
  IndexedGroup g;
  g.names = table.elements;
  const std::size_t n = g.names.size();
  if (n == 0) throw Error(ErrorKind::NotAGroup, "empty group");
  std::unordered_map<std::string, int> idx;
  for (std::size_t i = 0; i < n; ++i) {
    if (!idx.emplace(g.names[i], static_cast<int>(i)).second) {
      throw Error(ErrorKind::NotAGroup, "duplicate group element '" + g.names[i] + "'");
    }
  }
  if (table.table.size() != n) throw Error(ErrorKind::NotAGroup, "table has the wrong number of rows");
  g.mul.assign(n, std::vector<int>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (table.table[i].size() != n) throw Error(ErrorKind::NotAGroup, "row '" + g.names[i] + "' has the wrong length");
    for (std::size_t j = 0; j < n; ++j) {
      auto it = idx.find(table.table[i][j]);
      if (it == idx.end()) {
        throw Error(ErrorKind::NotAGroup, "product of '" + g.names[i] + "' and '" + g.names[j] +
                                              "' is not an element (closure)");
      }
      g.mul[i][j] = it->second;
    }
  }
  for (std::size_t e = 0; e < n && g.identity < 0; ++e) {
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j) {
      ok = g.mul[e][j] == static_cast<int>(j) && g.mul[j][e] == static_cast<int>(j);
    }
    if (ok) g.identity = static_cast<int>(e);
  }
  if (g.identity < 0) throw Error(ErrorKind::NotAGroup, "no identity element");
  g.inverse.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (g.mul[i][j] == g.identity && g.mul[j][i] == g.identity) g.inverse[i] = static_cast<int>(j);
    }
    if (g.inverse[i] < 0) throw Error(ErrorKind::NotAGroup, "'" + g.names[i] + "' has no inverse");
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (g.mul[static_cast<std::size_t>(g.mul[a][b])][c] != g.mul[a][static_cast<std::size_t>(g.mul[b][c])]) {
          throw Error(ErrorKind::NotAGroup, "associativity fails on ('" + g.names[a] + "', '" + g.names[b] +
                                                "', '" + g.names[c] + "')");
        }
  return g;
}

}  // namespace

GroupoidPtr group_groupoid(const GroupTable& table) {
  const IndexedGroup grp = index_group(table);
  const std::size_t n = grp.names.size();
  GroupoidTables t;
  t.names = grp.names;
  t.is_unit.assign(n, false);
  t.is_unit[static_cast<std::size_t>(grp.identity)] = true;
  t.src.assign(n, grp.identity);
  t.rng.assign(n, grp.identity);
  t.inv.assign(grp.inverse.begin(), grp.inverse.end());
  t.compose.resize(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t.compose[a * n + b] = grp.mul[a][b];
  return Groupoid::from_tables(std::move(t));
}

GroupoidPtr transformation_groupoid(std::span<const std::string> space, const GroupTable& group,
                                    const std::vector<std::vector<std::string>>& action) {
  if (space.empty()) throw Error(ErrorKind::EmptySet, "empty space");
  const IndexedGroup grp = index_group(group);
  const std::size_t m = space.size(), k = grp.names.size();
  std::unordered_map<std::string, int> pt;
  for (std::size_t i = 0; i < m; ++i) {
    if (!pt.emplace(space[i], static_cast<int>(i)).second) throw Error(ErrorKind::NotAnAction, "duplicate point");
  }
  if (action.size() != k) throw Error(ErrorKind::NotAnAction, "action needs one row per group element");
  std::vector<std::vector<int>> act(k, std::vector<int>(m));
  for (std::size_t g = 0; g < k; ++g) {
    if (action[g].size() != m) throw Error(ErrorKind::NotAnAction, "action row has the wrong length");
    std::vector<bool> hit(m, false);
    for (std::size_t x = 0; x < m; ++x) {
      auto it = pt.find(action[g][x]);
      if (it == pt.end()) throw Error(ErrorKind::NotAnAction, "image '" + action[g][x] + "' is not a point");
      act[g][x] = it->second;
      if (hit[static_cast<std::size_t>(it->second)]) {
        throw Error(ErrorKind::NotAnAction, "'" + grp.names[g] + "' does not act bijectively");
      }
      hit[static_cast<std::size_t>(it->second)] = true;
    }
  }
  for (std::size_t x = 0; x < m; ++x) {
    if (act[static_cast<std::size_t>(grp.identity)][x] != static_cast<int>(x)) {
      throw Error(ErrorKind::NotAnAction, "identity moves '" + space[x] + "'");
    }
    for (std::size_t g = 0; g < k; ++g)
      for (std::size_t h = 0; h < k; ++h)
        if (act[g][static_cast<std::size_t>(act[h][x])] != act[static_cast<std::size_t>(grp.mul[g][h])][x]) {
          throw Error(ErrorKind::NotAnAction, "g(hx) != (gh)x for g='" + grp.names[g] + "', h='" + grp.names[h] +
                                                  "', x='" + space[x] + "'");
        }
  }
  // Element (x, g) has index x * k + g.
  const std::size_t n = m * k;
  auto id = [k](std::size_t x, std::size_t g) { return static_cast<Elem>(x * k + g); };
  const auto e = static_cast<std::size_t>(grp.identity);
  GroupoidTables t;
  t.names.resize(n);
  t.is_unit.assign(n, false);
  t.src.resize(n);
  t.rng.resize(n);
  t.inv.resize(n);
  t.compose.assign(n * n, kUndefined);
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t g = 0; g < k; ++g) {
      const auto el = static_cast<std::size_t>(id(x, g));
      const auto ginv = static_cast<std::size_t>(grp.inverse[g]);
      const auto sx = static_cast<std::size_t>(act[ginv][x]);
      t.names[el] = pair_id(space[x], grp.names[g]);
      t.is_unit[el] = g == e;
      t.src[el] = id(sx, e);
      t.rng[el] = id(x, e);
      t.inv[el] = id(sx, ginv);
      for (std::size_t h = 0; h < k; ++h) {
        t.compose[el * n + static_cast<std::size_t>(id(sx, h))] = id(x, static_cast<std::size_t>(grp.mul[g][h]));
      }
    }
  }
  return Groupoid::from_tables(std::move(t));
}

const Fibre& source_fibre(const Groupoid& g, Elem x) {
  if (x < 0 || x >= g.size() || !g.is_unit(x)) {
    throw Error(ErrorKind::NotAUnit, x >= 0 && x < g.size() ? "'" + g.name(x) + "' is not a unit" : "index out of range");
  }
  return g.fibre_of_slot(g.unit_slot(x));
}

std::vector<Elem> range_fibre(const Groupoid& g, Elem y) {
  std::vector<Elem> out;
  for (Elem e = 0; e < g.size(); ++e)
    if (g.rng(e) == y) out.push_back(e);
  return out;
}

bool is_bisection(const Groupoid& g, std::span<const Elem> subset) {
  std::set<Elem> srcs, rngs, seen;
  for (Elem e : subset) {
    if (!seen.insert(e).second) continue;
    if (!srcs.insert(g.src(e)).second) return false;
    if (!rngs.insert(g.rng(e)).second) return false;
  }
  return true;
}

bool is_principal(const Groupoid& g) {
  std::set<std::pair<Elem, Elem>> seen;
  for (Elem e = 0; e < g.size(); ++e)
    if (!seen.emplace(g.src(e), g.rng(e)).second) return false;
  return true;
}

bool is_transitive(const Groupoid& g) {
  std::set<std::pair<Elem, Elem>> seen;
  for (Elem e = 0; e < g.size(); ++e) seen.emplace(g.src(e), g.rng(e));
  return seen.size() == static_cast<std::size_t>(g.unit_count()) * static_cast<std::size_t>(g.unit_count());
}

std::vector<Elem> product_set(const Groupoid& g, std::span<const Elem> a, std::span<const Elem> b) {
  std::vector<bool> hit(static_cast<std::size_t>(g.size()), false);
  for (Elem x : a)
    for (Elem y : b) {
      const Elem c = g.compose(x, y);
      if (c != kUndefined) hit[static_cast<std::size_t>(c)] = true;
    }
  std::vector<Elem> out;
  for (Elem e = 0; e < g.size(); ++e)
    if (hit[static_cast<std::size_t>(e)]) out.push_back(e);
  return out;
}

std::vector<Elem> inverse_set(const Groupoid& g, std::span<const Elem> a) {
  std::vector<Elem> out;
  out.reserve(a.size());
  for (Elem e : a) out.push_back(g.inv(e));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_symmetric(const Groupoid& g, std::span<const Elem> a) {
  std::vector<Elem> sorted(a.begin(), a.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  return inverse_set(g, sorted) == sorted;
}

std::vector<Elem> resolve(const Groupoid& g, std::span<const std::string> ids) {
  std::vector<Elem> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(g.index_of(id));
  return out;
}

}  // namespace gql
