#include "gql/semidirect.hpp"

#include <algorithm>

#include "gql/error.hpp"

namespace gql {

namespace {

std::size_t sz(int v) { return static_cast<std::size_t>(v); }

[[noreturn]] void not_action(const std::string& what) { throw Error(ErrorKind::NotAnAction, what); }

void require_self(const SemidirectProduct& sp) {
  const Groupoid& g = *sp.action.base;
  if (sp.action.space != g.names()) {
    throw Error(ErrorKind::DomainMismatch, "operation needs the product of G acting on itself");
  }
  for (Elem a = 0; a < g.size(); ++a)
    for (Elem z = 0; z < g.size(); ++z)
      if (sp.action.act[sz(a)][sz(z)] != g.compose(a, z)) {
        throw Error(ErrorKind::DomainMismatch, "operation needs the multiplication action");
      }
}

void require_on_product(const SemidirectProduct& sp, const GroupoidPtr& g, const char* what) {
  if (!same_groupoid(sp.product, g)) throw Error(ErrorKind::DomainMismatch, std::string(what) + ": input is not on G ⋊ G");
}

void require_on_base(const SemidirectProduct& sp, const GroupoidPtr& g, const char* what) {
  if (!same_groupoid(sp.action.base, g)) throw Error(ErrorKind::DomainMismatch, std::string(what) + ": input is not on G");
}

Elem product_unit_over(const SemidirectProduct& sp, Elem x) { return sp.at(x, x); }

}  // namespace

void validate_action(const GroupoidAction& a) {
  if (!a.base) not_action("no base groupoid");
  const Groupoid& g = *a.base;
  const auto ny = a.space.size();
  if (ny == 0) throw Error(ErrorKind::EmptySet, "action space is empty");
  if (a.anchor.size() != ny) not_action("anchor has the wrong length");
  if (a.act.size() != sz(g.size())) not_action("action table needs one row per groupoid element");
  for (std::size_t y = 0; y < ny; ++y) {
    const Elem p = a.anchor[y];
    if (p < 0 || p >= g.size() || !g.is_unit(p)) not_action("anchor of '" + a.space[y] + "' is not a unit");
  }
  for (Elem gamma = 0; gamma < g.size(); ++gamma) {
    const auto& row = a.act[sz(gamma)];
    if (row.size() != ny) not_action("action row has the wrong length");
    for (std::size_t y = 0; y < ny; ++y) {
      const bool defined = g.src(gamma) == a.anchor[y];
      const int img = row[y];
      if (defined != (img >= 0)) {
        not_action("'" + g.name(gamma) + "' . '" + a.space[y] + "' must be defined exactly when s(γ) = p(y)");
      }
      if (!defined) continue;
      if (sz(img) >= ny) not_action("image out of range");
      if (a.anchor[sz(img)] != g.rng(gamma)) {
        not_action("p('" + g.name(gamma) + "' . '" + a.space[y] + "') != r('" + g.name(gamma) + "')");
      }
      if (g.is_unit(gamma) && sz(img) != y) not_action("unit '" + g.name(gamma) + "' moves '" + a.space[y] + "'");
    }
  }
  for (Elem g1 = 0; g1 < g.size(); ++g1)
    for (Elem g2 = 0; g2 < g.size(); ++g2) {
      const Elem g21 = g.compose(g2, g1);
      if (g21 == kUndefined) continue;
      for (std::size_t y = 0; y < ny; ++y) {
        const int once = a.act[sz(g1)][y];
        if (once < 0) continue;
        if (a.act[sz(g2)][sz(once)] != a.act[sz(g21)][y]) {
          not_action("γ2(γ1 y) != (γ2 γ1) y for γ1 = '" + g.name(g1) + "', γ2 = '" + g.name(g2) + "', y = '" +
                     a.space[y] + "'");
        }
      }
    }
}

GroupoidAction multiplication_action(GroupoidPtr g) {
  GroupoidAction a;
  a.space = g->names();
  for (Elem z = 0; z < g->size(); ++z) a.anchor.push_back(g->rng(z));
  a.act.assign(sz(g->size()), std::vector<int>(sz(g->size()), -1));
  for (Elem gamma = 0; gamma < g->size(); ++gamma)
    for (Elem z = 0; z < g->size(); ++z) a.act[sz(gamma)][sz(z)] = g->compose(gamma, z);
  a.base = std::move(g);
  return a;
}

GroupoidAction unit_space_action(GroupoidPtr g) {
  GroupoidAction a;
  for (Elem u : g->units()) {
    a.space.push_back(g->name(u));
    a.anchor.push_back(u);
  }
  a.act.assign(sz(g->size()), std::vector<int>(a.space.size(), -1));
  for (Elem gamma = 0; gamma < g->size(); ++gamma)
    a.act[sz(gamma)][sz(g->unit_slot(g->src(gamma)))] = g->unit_slot(g->rng(gamma));
  a.base = std::move(g);
  return a;
}

SemidirectProduct semidirect_product(const GroupoidAction& action) {
  validate_action(action);
  const Groupoid& g = *action.base;
  const auto ny = action.space.size();

  // Provisional numbering; Groupoid::from_tables re-sorts by id afterwards.
  std::vector<std::vector<Elem>> provisional(ny, std::vector<Elem>(sz(g.size()), kUndefined));
  std::vector<int> py;
  std::vector<Elem> pg;
  for (std::size_t y = 0; y < ny; ++y)
    for (Elem gamma = 0; gamma < g.size(); ++gamma)
      if (g.rng(gamma) == action.anchor[y]) {
        provisional[y][sz(gamma)] = static_cast<Elem>(py.size());
        py.push_back(static_cast<int>(y));
        pg.push_back(gamma);
      }
  const std::size_t n = py.size();
  GroupoidTables t;
  t.names.resize(n);
  t.is_unit.assign(n, false);
  t.src.resize(n);
  t.rng.resize(n);
  t.inv.resize(n);
  t.compose.assign(n * n, kUndefined);
  for (std::size_t e = 0; e < n; ++e) {
    const int y = py[e];
    const Elem gamma = pg[e];
    const Elem ginv = g.inv(gamma);
    const int moved = action.act[sz(ginv)][sz(y)];
    t.names[e] = pair_id(action.space[sz(y)], g.name(gamma));
    t.is_unit[e] = gamma == action.anchor[sz(y)];
    t.rng[e] = provisional[sz(y)][sz(action.anchor[sz(y)])];
    t.src[e] = provisional[sz(moved)][sz(g.src(gamma))];
    t.inv[e] = provisional[sz(moved)][sz(ginv)];
    for (Elem g2 = 0; g2 < g.size(); ++g2) {
      const Elem other = provisional[sz(moved)][sz(g2)];
      if (other == kUndefined) continue;
      t.compose[e * n + sz(other)] = provisional[sz(y)][sz(g.compose(gamma, g2))];
    }
  }
  SemidirectProduct sp;
  sp.action = action;
  sp.product = Groupoid::from_tables(t);
  sp.point_of.assign(n, -1);
  sp.arrow_of.assign(n, kUndefined);
  sp.element.assign(ny, std::vector<Elem>(sz(g.size()), kUndefined));
  for (std::size_t e = 0; e < n; ++e) {
    const Elem idx = sp.product->index_of(t.names[e]);
    sp.point_of[sz(idx)] = py[e];
    sp.arrow_of[sz(idx)] = pg[e];
    sp.element[sz(py[e])][sz(pg[e])] = idx;
  }
  return sp;
}

SemidirectProduct self_semidirect(GroupoidPtr g) { return semidirect_product(multiplication_action(std::move(g))); }

Complex TubeFunction::operator()(Elem gamma, Elem alpha) const {
  const Groupoid& g = *groupoid;
  if (g.src(gamma) != g.src(alpha)) throw Error(ErrorKind::DomainMismatch, "tube functions need s(γ) = s(α)");
  return blocks[sz(g.unit_slot(g.src(gamma)))](g.fibre_position(gamma), g.fibre_position(alpha));
}

FibreOperatorFamily tube_rep(const TubeFunction& f) {
  FibreOperatorFamily t{f.groupoid, f.blocks};
  check_shape(t);
  return t;
}

TubeFunction tube_from_family(const FibreOperatorFamily& t) {
  check_shape(t);
  return {t.groupoid, t.blocks};
}

TubeFunction vartheta(const SemidirectProduct& sp, const ModuleVector& f) {
  require_self(sp);
  require_on_product(sp, f.groupoid, "vartheta");
  const Groupoid& g = *sp.action.base;
  TubeFunction out{sp.action.base, {}};
  for (int k = 0; k < g.unit_count(); ++k) {
    const auto& m = g.fibre_of_slot(k).members;
    const auto n = static_cast<Eigen::Index>(m.size());
    Eigen::MatrixXcd b(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const Elem gi = m[static_cast<std::size_t>(i)], gj = m[static_cast<std::size_t>(j)];
        b(i, j) = f.values[sp.at(gi, g.compose(gi, g.inv(gj)))];
      }
    out.blocks.push_back(std::move(b));
  }
  return out;
}

FibreOperatorFamily theta(const SemidirectProduct& sp, const ModuleVector& f) { return tube_rep(vartheta(sp, f)); }

ModuleVector iota(const SemidirectProduct& sp, const ModuleVector& xi) {
  require_self(sp);
  require_on_base(sp, xi.groupoid, "iota");
  ModuleVector out = ModuleVector::zeros(sp.product);
  for (Elem e = 0; e < sp.product->size(); ++e) out.values[e] = xi.values[sp.arrow_of[sz(e)]];
  return out;
}

ModuleVector kappa(const SemidirectProduct& sp, const ModuleVector& eta) {
  require_self(sp);
  require_on_product(sp, eta.groupoid, "kappa");
  ModuleVector out = ModuleVector::zeros(sp.action.base);
  for (Elem gamma = 0; gamma < sp.action.base->size(); ++gamma) out.values[gamma] = eta.values[sp.at(gamma, gamma)];
  return out;
}

FibreOperatorFamily Theta(const SemidirectProduct& sp, const FibreOperatorFamily& t, double tol) {
  require_self(sp);
  require_on_product(sp, t.groupoid, "Theta");
  const auto check = is_equivariant(t, tol);
  if (!check.equivariant) throw Error(ErrorKind::NotEquivariant, "Theta needs an equivariant family", check.defect);
  const GroupoidPtr& base = sp.action.base;
  FibreOperatorFamily out = FibreOperatorFamily::zeros(base);
  for (int k = 0; k < base->unit_count(); ++k) {
    const auto& m = base->fibre_of_slot(k).members;
    for (std::size_t j = 0; j < m.size(); ++j) {
      const ModuleVector col = kappa(sp, apply(t, iota(sp, ModuleVector::delta(base, m[j]))));
      for (std::size_t i = 0; i < m.size(); ++i) {
        out.blocks[sz(k)](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col.values[m[i]];
      }
    }
  }
  return out;
}

Eigen::MatrixXcd ad_slice(const SemidirectProduct& sp, const FibreOperatorFamily& t, Elem x) {
  require_self(sp);
  require_on_product(sp, t.groupoid, "ad_slice");
  check_shape(t);
  const Groupoid& g = *sp.action.base;
  const auto& m = source_fibre(g, x).members;
  const Groupoid& p = *sp.product;
  const auto& block = t.blocks[sz(p.unit_slot(product_unit_over(sp, x)))];
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXcd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const Elem gi = m[static_cast<std::size_t>(i)], gj = m[static_cast<std::size_t>(j)];
      out(i, j) = block(p.fibre_position(sp.at(gi, gi)), p.fibre_position(sp.at(gj, gj)));
    }
  return out;
}

FibreOperatorFamily extend_equivariant_family(const SemidirectProduct& sp, const std::vector<Eigen::MatrixXcd>& blocks) {
  require_self(sp);
  const Groupoid& g = *sp.action.base;
  const Groupoid& p = *sp.product;
  if (blocks.size() != sz(g.unit_count())) throw Error(ErrorKind::DimensionMismatch, "need one block per unit of G");
  FibreOperatorFamily out = FibreOperatorFamily::zeros(sp.product);
  // Undo Ad on the fibres over G-units.
  for (int k = 0; k < g.unit_count(); ++k) {
    const Elem x = g.units()[sz(k)];
    const auto& m = g.fibre_of_slot(k).members;
    const auto n = static_cast<Eigen::Index>(m.size());
    if (blocks[sz(k)].rows() != n || blocks[sz(k)].cols() != n) {
      throw Error(ErrorKind::DimensionMismatch, "block for '" + g.name(x) + "' does not match its fibre");
    }
    auto& target = out.blocks[sz(p.unit_slot(product_unit_over(sp, x)))];
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const Elem gi = m[static_cast<std::size_t>(i)], gj = m[static_cast<std::size_t>(j)];
        target(p.fibre_position(sp.at(gi, gi)), p.fibre_position(sp.at(gj, gj))) = blocks[sz(k)](i, j);
      }
  }
  // Every product unit z is reached from the G-unit s(z) by the arrow (z,z).
  for (Elem z = 0; z < g.size(); ++z) {
    if (g.is_unit(z)) continue;
    const Elem e = sp.at(z, z);
    const auto& from_block = out.blocks[sz(p.unit_slot(p.src(e)))];
    auto& to_block = out.blocks[sz(p.unit_slot(p.rng(e)))];
    const auto& from = p.fibre_of_slot(p.unit_slot(p.src(e))).members;
    const Elem einv = p.inv(e);
    std::vector<int> pos(from.size());
    for (std::size_t i = 0; i < from.size(); ++i) pos[i] = p.fibre_position(p.compose(from[i], einv));
    for (std::size_t i = 0; i < from.size(); ++i)
      for (std::size_t j = 0; j < from.size(); ++j) {
        to_block(pos[i], pos[j]) = from_block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
  }
  return out;
}

Filtration lift_filtration(const SemidirectProduct& sp, const Filtration& filt) {
  require_on_base(sp, filt.groupoid(), "lift_filtration");
  std::vector<std::vector<Elem>> levels(sz(filt.depth()) + 1);
  for (int n = 0; n <= filt.depth(); ++n)
    for (Elem e = 0; e < sp.product->size(); ++e)
      if (filt.level_of(sp.arrow_of[sz(e)]) <= n) levels[sz(n)].push_back(e);
  return Filtration::from_levels(sp.product, levels);
}

TransferReport ql_transfer_check(const SemidirectProduct& sp, const FibreOperatorFamily& t, const Filtration& filt_g,
                                 const Filtration& filt_product, int exact_limit, double tol) {
  require_self(sp);
  require_on_product(sp, t.groupoid, "ql_transfer_check");
  require_on_product(sp, filt_product.groupoid(), "ql_transfer_check");
  require_on_base(sp, filt_g.groupoid(), "ql_transfer_check");
  const auto check = is_equivariant(t, tol);
  if (!check.equivariant) throw Error(ErrorKind::NotEquivariant, "transfer needs an equivariant family", check.defect);
  const Groupoid& g = *sp.action.base;
  FibreOperatorFamily slices{sp.action.base, {}};
  for (Elem x : g.units()) slices.blocks.push_back(ad_slice(sp, t, x));

  TransferReport r;
  r.base = propagation_profile(slices, filt_g, exact_limit);
  r.product = propagation_profile(t, filt_product, exact_limit);
  const std::size_t levels = std::min(r.base.levels.size(), r.product.levels.size());
  for (std::size_t n = 0; n < levels; ++n) {
    const auto& a = r.base.levels[n];
    const auto& b = r.product.levels[n];
    r.gap.push_back(std::max({0.0, a.lower - b.upper, b.lower - a.upper}));
  }
  r.base_support_level = support_level(slices, filt_g);
  r.product_support_level = support_level(t, filt_product);
  return r;
}

}  // namespace gql
