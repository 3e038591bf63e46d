#include <CLI11.hpp>
#include <iostream>
#include <utility>

#include "gql/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Finite groupoid operator toolkit"};
  app.require_subcommand(1);
  gql::CommandOptions opts;
  std::uint64_t seed = 0;
  int exact_limit = 0;
  double tol = 0.0;

  const std::pair<const char*, const char*> verbs[] = {
      {"build", "validate a groupoid and filtration, write canonical JSON"},
      {"diagnose", "equivariance, convolver, support and propagation profiles"},
      {"approximate", "Schur-multiplier approximation over a witness sweep"},
      {"semidirect", "transfer to the semi-direct product and check its identities"},
      {"verify", "randomized invariant suite"},
  };
  for (const auto& [verb, help] : verbs) {
    auto* sub = app.add_subcommand(verb, help);
    sub->add_option("--config", opts.config, "experiment config (JSON)");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--exact-limit", exact_limit, "largest fibre enumerated exactly (default 14)");
    sub->add_option("--tol", tol, "equivariance tolerance (default 1e-9)");
    sub->add_option("--out", opts.out, "output directory");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gql::kExitValidation;
  }
  auto* sub = app.get_subcommands().front();
  if (sub->count("--seed")) opts.overrides.seed = seed;
  if (sub->count("--exact-limit")) opts.overrides.exact_limit = exact_limit;
  if (sub->count("--tol")) opts.overrides.tol = tol;
  return gql::run_command(sub->get_name(), opts, std::cout, std::cerr);
}
