#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gql/approximation.hpp"
#include "gql/corpus.hpp"
#include "gql/io.hpp"

namespace gql {

/// Where an operator comes from: a family document or a seeded recipe.
/// Recipes: identity, random, random_equivariant, banded, banded_equivariant, diagonal.
struct OperatorSpec {
  std::string recipe = "random_equivariant";
  std::filesystem::path file;
  int band = 1;
};

/// Witness list. Kinds: one, units, windows (widths, then h = 1), balls (levels), file.
struct WitnessSpec {
  std::string kind = "one";
  std::vector<int> widths;
  std::vector<int> levels;
  std::filesystem::path file;
};

struct ExperimentConfig {
  std::filesystem::path source;  // config file, empty for inline configs
  json groupoid;                 // inline description document
  std::optional<json> filtration;
  OperatorSpec op;
  std::optional<OperatorSpec> vector;  // recipe "random" or a vector file
  WitnessSpec witness;
  int level = 1;  // n for witness variation
  std::string kernel = "standard";
  int modified_level = 0;
  std::uint64_t seed = 1;
  int exact_limit = kDefaultExactLimit;
  double tol = 1e-9;
  int trials = 20;
};

/// Relative paths resolve against the config file's directory. Throws InvalidConfig or ParseError.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig config_from_json(const json& doc, const std::filesystem::path& base_dir);

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> exact_limit;
  std::optional<double> tol;
};
void apply_overrides(ExperimentConfig& cfg, const CliOverrides& o);

/// Groupoid, filtration and point order resolved from a config.
struct Experiment {
  ParsedGroupoid parsed;
  Filtration filt;
};
Experiment load_experiment(const ExperimentConfig& cfg);

/// Operator draws come first from `rng`, so a fixed seed fixes every later draw too.
FibreOperatorFamily make_operator(const OperatorSpec& spec, const Experiment& ex, Rng& rng);
ModuleVector make_vector(const OperatorSpec& spec, const Experiment& ex, Rng& rng);
std::vector<NamedWitness> make_witnesses(const WitnessSpec& spec, const Experiment& ex);
ApproximationOptions approximation_options(const ExperimentConfig& cfg);

}  // namespace gql
