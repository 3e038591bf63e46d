#pragma once

#include <filesystem>
#include <ostream>
#include <string_view>

#include "gql/config.hpp"

namespace gql {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitInvariant = 2;

struct CommandOptions {
  std::filesystem::path config;  // optional for verify
  CliOverrides overrides;
  std::filesystem::path out = ".";
};

/// Verbs: build, diagnose, approximate, semidirect, verify. Library errors are reported on
/// `err` and map to kExitValidation; failed invariants map to kExitInvariant.
int run_command(std::string_view verb, const CommandOptions& opts, std::ostream& out, std::ostream& err);

int cmd_build(const ExperimentConfig& cfg, const std::filesystem::path& dir, std::ostream& out);
int cmd_diagnose(const ExperimentConfig& cfg, const std::filesystem::path& dir, std::ostream& out);
int cmd_approximate(const ExperimentConfig& cfg, const std::filesystem::path& dir, std::ostream& out);
int cmd_semidirect(const ExperimentConfig& cfg, const std::filesystem::path& dir, std::ostream& out);
int cmd_verify(std::uint64_t seed, int trials, const std::filesystem::path& dir, std::ostream& out);

}  // namespace gql
