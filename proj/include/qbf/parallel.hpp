#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace qbf {

/// Worker count: QB_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, count). Indices are dealt round-robin to the
/// workers and each worker visits its indices in increasing order. If any
/// call throws, the exception from the smallest failing index is rethrown
/// after all workers have stopped, so the outcome does not depend on
/// scheduling. Calls made from inside a body run serially.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Ordered map: out[i] = f(i), computed with parallel_for.
template <class T, class F>
std::vector<T> parallel_map(std::size_t count, F&& f) {
  std::vector<std::optional<T>> slots(count);
  parallel_for(count, [&](std::size_t i) { slots[i].emplace(f(i)); });
  std::vector<T> out;
  out.reserve(count);
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

}  // namespace qbf
