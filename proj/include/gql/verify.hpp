#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gql {

struct CheckResult {
  std::string name;
  bool passed = true;
  int cases = 0;
  std::string counterexample;  // first failure, empty when passed
};

/// Runs every invariant over the standard corpus. `trials` scales the random draws;
/// each check seeds its own generator from `seed` and its position, so results do
/// not depend on which checks run or on the worker count.
std::vector<CheckResult> run_invariant_suite(std::uint64_t seed, int trials);

}  // namespace gql
