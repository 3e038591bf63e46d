#include "gql/config.hpp"

#include "gql/error.hpp"

namespace gql {

namespace {

namespace fs = std::filesystem;

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::InvalidConfig, "config field " + field + ": " + what);
}

int get_int(const json& doc, const char* key, int fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc[key].is_number_integer()) bad(std::string("/") + key, "expected an integer");
  return doc[key].get<int>();
}

std::vector<int> int_list(const json& v, const std::string& field) {
  if (!v.is_array()) bad(field, "expected an array of integers");
  std::vector<int> out;
  for (const auto& x : v) {
    if (!x.is_number_integer()) bad(field, "expected an array of integers");
    out.push_back(x.get<int>());
  }
  return out;
}

fs::path resolve_path(const json& v, const std::string& field, const fs::path& base) {
  if (!v.is_string()) bad(field, "expected a path");
  fs::path p = v.get<std::string>();
  if (p.is_relative()) p = base / p;
  if (!fs::exists(p)) bad(field, "'" + p.string() + "' does not exist");
  return p;
}

json document_or_file(const json& v, const std::string& field, const fs::path& base) {
  if (v.is_string()) return load_json_file(resolve_path(v, field, base));
  if (!v.is_object()) bad(field, "expected a path or an inline document");
  return v;
}

OperatorSpec operator_spec(const json& v, const std::string& field, const fs::path& base) {
  OperatorSpec s;
  if (v.is_string()) {
    s.recipe = "file";
    s.file = resolve_path(v, field, base);
    return s;
  }
  if (!v.is_object()) bad(field, "expected a path or an object");
  if (v.contains("file")) {
    s.recipe = "file";
    s.file = resolve_path(v["file"], field + "/file", base);
  } else if (v.contains("recipe")) {
    if (!v["recipe"].is_string()) bad(field + "/recipe", "expected a string");
    s.recipe = v["recipe"].get<std::string>();
  }
  s.band = get_int(v, "band", 1);
  return s;
}

}  // namespace

ExperimentConfig config_from_json(const json& doc, const fs::path& base) {
  if (!doc.is_object()) bad("/", "expected an object");
  ExperimentConfig c;
  if (!doc.contains("groupoid")) bad("/groupoid", "missing");
  c.groupoid = document_or_file(doc["groupoid"], "/groupoid", base);
  if (doc.contains("filtration")) c.filtration = document_or_file(doc["filtration"], "/filtration", base);
  if (doc.contains("operator")) c.op = operator_spec(doc["operator"], "/operator", base);
  if (doc.contains("vector")) c.vector = operator_spec(doc["vector"], "/vector", base);
  if (doc.contains("witness")) {
    const json& w = doc["witness"];
    if (w.is_string()) {
      c.witness.kind = w.get<std::string>();
    } else if (w.is_object()) {
      if (!w.contains("kind") || !w["kind"].is_string()) bad("/witness/kind", "expected a string");
      c.witness.kind = w["kind"].get<std::string>();
      if (w.contains("widths")) c.witness.widths = int_list(w["widths"], "/witness/widths");
      if (w.contains("levels")) c.witness.levels = int_list(w["levels"], "/witness/levels");
      if (w.contains("file")) c.witness.file = resolve_path(w["file"], "/witness/file", base);
    } else {
      bad("/witness", "expected a kind or an object");
    }
    const auto& k = c.witness.kind;
    if (k != "one" && k != "units" && k != "windows" && k != "balls" && k != "file") {
      bad("/witness/kind", "unknown kind '" + k + "'");
    }
    if (k == "file" && c.witness.file.empty()) bad("/witness/file", "missing");
  }
  c.level = get_int(doc, "level", c.level);
  if (doc.contains("kernel")) {
    if (!doc["kernel"].is_string()) bad("/kernel", "expected a string");
    c.kernel = doc["kernel"].get<std::string>();
    if (c.kernel != "standard" && c.kernel != "modified") bad("/kernel", "expected 'standard' or 'modified'");
  }
  c.modified_level = get_int(doc, "modified_level", c.modified_level);
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) bad("/seed", "expected a non-negative integer");
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  c.exact_limit = get_int(doc, "exact_limit", c.exact_limit);
  if (doc.contains("tol")) {
    if (!doc["tol"].is_number()) bad("/tol", "expected a number");
    c.tol = doc["tol"].get<double>();
  }
  c.trials = get_int(doc, "trials", c.trials);
  if (c.exact_limit < 1) bad("/exact_limit", "must be at least 1");
  if (!(c.tol > 0)) bad("/tol", "must be positive");
  if (c.trials < 1) bad("/trials", "must be at least 1");
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  auto c = config_from_json(load_json_file(path), path.parent_path());
  c.source = path;
  return c;
}

void apply_overrides(ExperimentConfig& cfg, const CliOverrides& o) {
  if (o.seed) cfg.seed = *o.seed;
  if (o.exact_limit) {
    if (*o.exact_limit < 1) throw Error(ErrorKind::InvalidConfig, "--exact-limit must be at least 1");
    cfg.exact_limit = *o.exact_limit;
  }
  if (o.tol) {
    if (!(*o.tol > 0)) throw Error(ErrorKind::InvalidConfig, "--tol must be positive");
    cfg.tol = *o.tol;
  }
}

Experiment load_experiment(const ExperimentConfig& cfg) {
  auto parsed = groupoid_from_json(cfg.groupoid);
  if (cfg.filtration) {
    auto f = filtration_from_json(parsed.groupoid, *cfg.filtration);
    return {std::move(parsed), std::move(f)};
  }
  if (!parsed.filtration) {
    throw Error(ErrorKind::InvalidConfig, "no filtration: give /filtration or use a metric_pair groupoid");
  }
  auto f = *parsed.filtration;
  return {std::move(parsed), std::move(f)};
}

FibreOperatorFamily make_operator(const OperatorSpec& spec, const Experiment& ex, Rng& rng) {
  const auto& g = ex.filt.groupoid();
  const auto& r = spec.recipe;
  if (r == "file") return family_from_json(g, load_json_file(spec.file));
  if (r == "identity") return FibreOperatorFamily::identity(g);
  if (r == "random") return random_family(g, rng);
  if (r == "random_equivariant") return random_equivariant(g, rng);
  if (r == "banded") return random_banded_family(ex.filt, spec.band, rng);
  if (r == "banded_equivariant") return lambda(random_banded_function(ex.filt, spec.band, rng));
  if (r == "diagonal") return multiplication_operator(random_function(g, rng));
  throw Error(ErrorKind::InvalidConfig, "unknown operator recipe '" + r + "'");
}

ModuleVector make_vector(const OperatorSpec& spec, const Experiment& ex, Rng& rng) {
  const auto& g = ex.filt.groupoid();
  if (spec.recipe == "file") return vector_from_json(g, load_json_file(spec.file));
  if (spec.recipe == "random") return random_function(g, rng);
  if (spec.recipe == "banded") return random_banded_function(ex.filt, spec.band, rng);
  throw Error(ErrorKind::InvalidConfig, "unknown vector recipe '" + spec.recipe + "'");
}

std::vector<NamedWitness> make_witnesses(const WitnessSpec& spec, const Experiment& ex) {
  const auto& g = ex.filt.groupoid();
  std::vector<NamedWitness> out;
  if (spec.kind == "one") {
    out.push_back({"one", PositiveTypeFunction::certify(ModuleVector::constant(g, 1.0))});
  } else if (spec.kind == "units") {
    out.push_back({"units", PositiveTypeFunction::certify(ModuleVector::units_indicator(g))});
  } else if (spec.kind == "windows") {
    if (ex.parsed.points.empty()) throw Error(ErrorKind::InvalidConfig, "window witnesses need a pair groupoid");
    for (int w : spec.widths) {
      out.push_back({"w" + std::to_string(w), witness_from_density(window_density(g, ex.parsed.points, w))});
    }
    out.push_back({"one", PositiveTypeFunction::certify(ModuleVector::constant(g, 1.0))});
  } else if (spec.kind == "balls") {
    for (int m : spec.levels) {
      if (m < 0 || m > ex.filt.depth()) throw Error(ErrorKind::InvalidConfig, "ball level outside the filtration");
      out.push_back({"ball" + std::to_string(m), witness_from_density(ball_density(ex.filt, m))});
    }
  } else {
    out.push_back({spec.file.stem().string(),
                   PositiveTypeFunction::certify(vector_from_json(g, load_json_file(spec.file)))});
  }
  return out;
}

ApproximationOptions approximation_options(const ExperimentConfig& cfg) {
  return {cfg.tol, cfg.kernel == "modified" ? KernelMode::Modified : KernelMode::Standard, cfg.modified_level};
}

}  // namespace gql
