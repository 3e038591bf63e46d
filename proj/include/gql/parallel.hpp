#pragma once

#include <cstddef>
#include <functional>

namespace gql {

/// Worker count: GQL_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, n). Each index is handled by exactly one worker;
/// callers write into per-index slots so results do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace gql
