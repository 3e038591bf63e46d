#include "gql/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "gql/error.hpp"

namespace gql {

namespace {

std::size_t sz(int v) { return static_cast<std::size_t>(v); }

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::ParseError, "field " + (path.empty() ? std::string("/") : path) + ": " + what);
}

const json& member(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) field_error(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) field_error(path + "/" + key, "missing");
  return *it;
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) field_error(path, "expected a string");
  return v.get<std::string>();
}

std::vector<std::string> string_list(const json& v, const std::string& path) {
  if (!v.is_array()) field_error(path, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_string(v[i], path + "/" + std::to_string(i)));
  return out;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) field_error(path, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) field_error(path, "expected an integer");
  return v.get<int>();
}

std::map<std::string, std::string> string_map(const json& v, const std::string& path) {
  if (!v.is_object()) field_error(path, "expected an object of strings");
  std::map<std::string, std::string> out;
  for (auto it = v.begin(); it != v.end(); ++it) out[it.key()] = as_string(it.value(), path + "/" + it.key());
  return out;
}

Complex as_complex(const json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_array() || v.size() != 2) field_error(path, "expected [re, im]");
  return {as_number(v[0], path + "/0"), as_number(v[1], path + "/1")};
}

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

GroupTable group_table(const json& v, const std::string& path) {
  GroupTable t;
  t.elements = string_list(member(v, path, "elements"), path + "/elements");
  const json& rows = member(v, path, "table");
  if (!rows.is_array()) field_error(path + "/table", "expected an array of rows");
  for (std::size_t i = 0; i < rows.size(); ++i) t.table.push_back(string_list(rows[i], path + "/table/" + std::to_string(i)));
  return t;
}

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is one past the offending character.
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw Error(ErrorKind::ParseError, source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidConfig, "cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path.string());
}

ParsedGroupoid groupoid_from_json(const json& doc) {
  const std::string kind = as_string(member(doc, "", "kind"), "/kind");
  ParsedGroupoid out;
  if (kind == "explicit") {
    ExplicitDescription d;
    d.elements = string_list(member(doc, "", "elements"), "/elements");
    d.units = string_list(member(doc, "", "units"), "/units");
    d.src = string_map(member(doc, "", "src"), "/src");
    d.rng = string_map(member(doc, "", "rng"), "/rng");
    d.inv = string_map(member(doc, "", "inv"), "/inv");
    const json& comp = member(doc, "", "compose");
    if (!comp.is_array()) field_error("/compose", "expected an array of [a, b, ab] triples");
    for (std::size_t i = 0; i < comp.size(); ++i) {
      const auto triple = string_list(comp[i], "/compose/" + std::to_string(i));
      if (triple.size() != 3) field_error("/compose/" + std::to_string(i), "expected [a, b, ab]");
      d.compose.push_back({triple[0], triple[1], triple[2]});
    }
    out.groupoid = build_groupoid(d);
  } else if (kind == "pair") {
    out.points = string_list(member(doc, "", "points"), "/points");
    out.groupoid = pair_groupoid(out.points);
  } else if (kind == "group") {
    out.groupoid = group_groupoid(group_table(doc, ""));
  } else if (kind == "transformation") {
    const auto space = string_list(member(doc, "", "space"), "/space");
    const auto group = group_table(member(doc, "", "group"), "/group");
    const json& act = member(doc, "", "action");
    if (!act.is_array()) field_error("/action", "expected one row per group element");
    std::vector<std::vector<std::string>> action;
    for (std::size_t i = 0; i < act.size(); ++i) action.push_back(string_list(act[i], "/action/" + std::to_string(i)));
    out.groupoid = transformation_groupoid(space, group, action);
  } else if (kind == "metric_pair") {
    out.points = string_list(member(doc, "", "points"), "/points");
    const json& dist = member(doc, "", "dist");
    if (!dist.is_array()) field_error("/dist", "expected a square table");
    std::vector<std::vector<double>> d;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      const std::string p = "/dist/" + std::to_string(i);
      if (!dist[i].is_array()) field_error(p, "expected a row");
      std::vector<double> row;
      for (std::size_t j = 0; j < dist[i].size(); ++j) row.push_back(as_number(dist[i][j], p + "/" + std::to_string(j)));
      d.push_back(std::move(row));
    }
    const double scale = as_number(member(doc, "", "scale"), "/scale");
    const int depth = as_int(member(doc, "", "depth"), "/depth");
    out.filtration = metric_filtration(out.points, d, scale, depth);
    out.groupoid = out.filtration->groupoid();
  } else {
    field_error("/kind", "unknown kind '" + kind + "'");
  }
  return out;
}

json groupoid_to_json(const Groupoid& g) {
  json doc;
  doc["kind"] = "explicit";
  doc["elements"] = g.names();
  json units = json::array();
  for (Elem u : g.units()) units.push_back(g.name(u));
  doc["units"] = units;
  json src = json::object(), rng = json::object(), inv = json::object();
  for (Elem e = 0; e < g.size(); ++e) {
    src[g.name(e)] = g.name(g.src(e));
    rng[g.name(e)] = g.name(g.rng(e));
    inv[g.name(e)] = g.name(g.inv(e));
  }
  doc["src"] = src;
  doc["rng"] = rng;
  doc["inv"] = inv;
  json comp = json::array();
  for (Elem a = 0; a < g.size(); ++a)
    for (Elem b = 0; b < g.size(); ++b) {
      const Elem c = g.compose(a, b);
      if (c != kUndefined) comp.push_back(json::array({g.name(a), g.name(b), g.name(c)}));
    }
  doc["compose"] = comp;
  return doc;
}

Filtration filtration_from_json(const GroupoidPtr& g, const json& doc) {
  if (!doc.is_object()) field_error("", "expected a filtration object");
  if (doc.contains("levels")) {
    const json& lv = doc["levels"];
    if (!lv.is_array()) field_error("/levels", "expected an array of levels");
    std::vector<std::vector<Elem>> levels;
    for (std::size_t i = 0; i < lv.size(); ++i) {
      const std::string p = "/levels/" + std::to_string(i);
      std::vector<Elem> level;
      for (const auto& id : string_list(lv[i], p)) {
        auto e = g->find(id);
        if (!e) field_error(p, "unknown element '" + id + "'");
        level.push_back(*e);
      }
      std::sort(level.begin(), level.end());
      levels.push_back(std::move(level));
    }
    return Filtration::from_levels(g, levels);
  }
  std::vector<Elem> gen;
  for (const auto& id : string_list(member(doc, "", "generators"), "/generators")) {
    auto e = g->find(id);
    if (!e) field_error("/generators", "unknown element '" + id + "'");
    gen.push_back(*e);
  }
  std::sort(gen.begin(), gen.end());
  gen.erase(std::unique(gen.begin(), gen.end()), gen.end());
  return build_filtration(g, gen, as_int(member(doc, "", "depth"), "/depth"));
}

json filtration_to_json(const Filtration& f) {
  const Groupoid& g = *f.groupoid();
  json doc;
  doc["depth"] = f.depth();
  json levels = json::array();
  for (int n = 0; n <= f.depth(); ++n) {
    json level = json::array();
    for (Elem e : f.level(n)) level.push_back(g.name(e));
    levels.push_back(level);
  }
  doc["levels"] = levels;
  doc["cardinalities"] = f.cardinalities();
  return doc;
}

ModuleVector vector_from_json(const GroupoidPtr& g, const json& doc) {
  const json& values = member(doc, "", "values");
  if (!values.is_object()) field_error("/values", "expected an object mapping ids to [re, im]");
  ModuleVector v = ModuleVector::zeros(g);
  for (auto it = values.begin(); it != values.end(); ++it) {
    auto e = g->find(it.key());
    if (!e) field_error("/values/" + it.key(), "unknown element");
    v.values[*e] = as_complex(it.value(), "/values/" + it.key());
  }
  return v;
}

json vector_to_json(const ModuleVector& v) {
  json values = json::object();
  for (Elem e = 0; e < v.groupoid->size(); ++e) values[v.groupoid->name(e)] = complex_json(v.values[e]);
  return json{{"values", values}};
}

FibreOperatorFamily family_from_json(const GroupoidPtr& g, const json& doc) {
  const json& fibres = member(doc, "", "fibres");
  if (!fibres.is_array()) field_error("/fibres", "expected an array");
  FibreOperatorFamily t = FibreOperatorFamily::zeros(g);
  std::vector<bool> seen(sz(g->unit_count()), false);
  for (std::size_t f = 0; f < fibres.size(); ++f) {
    const std::string p = "/fibres/" + std::to_string(f);
    const std::string unit = as_string(member(fibres[f], p, "unit"), p + "/unit");
    auto u = g->find(unit);
    if (!u || !g->is_unit(*u)) field_error(p + "/unit", "'" + unit + "' is not a unit");
    const int slot = g->unit_slot(*u);
    if (seen[sz(slot)]) field_error(p + "/unit", "unit '" + unit + "' listed twice");
    seen[sz(slot)] = true;
    const auto order = string_list(member(fibres[f], p, "order"), p + "/order");
    const auto& fibre = g->fibre_of_slot(slot);
    if (order.size() != fibre.size()) field_error(p + "/order", "must list the whole source fibre");
    std::vector<int> pos;
    std::vector<bool> hit(fibre.size(), false);
    for (const auto& id : order) {
      auto e = g->find(id);
      if (!e || g->src(*e) != *u) field_error(p + "/order", "'" + id + "' is not in the source fibre of '" + unit + "'");
      const int k = g->fibre_position(*e);
      if (hit[sz(k)]) field_error(p + "/order", "'" + id + "' listed twice");
      hit[sz(k)] = true;
      pos.push_back(k);
    }
    const json& mat = member(fibres[f], p, "matrix");
    if (!mat.is_array() || mat.size() != order.size()) field_error(p + "/matrix", "expected one row per fibre element");
    for (std::size_t i = 0; i < mat.size(); ++i) {
      const std::string pr = p + "/matrix/" + std::to_string(i);
      if (!mat[i].is_array() || mat[i].size() != order.size()) field_error(pr, "row has the wrong length");
      for (std::size_t j = 0; j < mat[i].size(); ++j) {
        t.blocks[sz(slot)](pos[i], pos[j]) = as_complex(mat[i][j], pr + "/" + std::to_string(j));
      }
    }
  }
  for (int k = 0; k < g->unit_count(); ++k) {
    if (!seen[sz(k)]) field_error("/fibres", "no block for unit '" + g->name(g->units()[sz(k)]) + "'");
  }
  return t;
}

json family_to_json(const FibreOperatorFamily& t) {
  const Groupoid& g = *t.groupoid;
  json fibres = json::array();
  for (int k = 0; k < g.unit_count(); ++k) {
    const auto& fibre = g.fibre_of_slot(k);
    json order = json::array();
    for (Elem e : fibre.members) order.push_back(g.name(e));
    json mat = json::array();
    const auto& b = t.blocks[sz(k)];
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < b.cols(); ++j) row.push_back(complex_json(b(i, j)));
      mat.push_back(row);
    }
    fibres.push_back(json{{"unit", g.name(fibre.base)}, {"order", order}, {"matrix", mat}});
  }
  return json{{"fibres", fibres}};
}

void write_profile_csv(std::ostream& os, const PropagationProfile& p) {
  os << "# gql-profile v1\n";
  os << "level,lower,upper,method\n";
  for (std::size_t n = 0; n < p.levels.size(); ++n) {
    const auto& e = p.levels[n];
    os << n << ',' << format_double(e.lower) << ',' << format_double(e.upper) << ',' << to_string(e.method) << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "# gql-sweep v1\n";
  os << "witness,support_level,epsilon,global_error\n";
  for (const auto& r : rows) {
    os << r.id << ',' << r.support_level << ',' << format_double(r.epsilon) << ',' << format_double(r.global_error) << '\n';
  }
}

}  // namespace gql
