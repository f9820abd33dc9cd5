#include "qbf/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <limits>
#include <string>
#include <thread>

namespace qbf {

std::size_t worker_count() {
  if (const char* env = std::getenv("QB_THREADS")) {
    try {
      std::size_t used = 0;
      const long value = std::stol(env, &used);
      if (used == std::string(env).size() && value > 0) return static_cast<std::size_t>(value);
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

namespace {
// Set inside worker bodies so that nested calls run serially.
thread_local bool in_parallel_region = false;
}  // namespace

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  const std::size_t workers = in_parallel_region ? 1 : std::min(worker_count(), count);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }

  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> failed_at(workers, kNone);
  std::vector<std::exception_ptr> errors(workers);
  auto run = [&](std::size_t k) {
    const bool outer = in_parallel_region;
    in_parallel_region = true;
    struct Reset {
      bool value;
      ~Reset() { in_parallel_region = value; }
    } reset{outer};
    for (std::size_t i = k; i < count; i += workers) {
      try {
        body(i);
      } catch (...) {
        failed_at[k] = i;
        errors[k] = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(workers - 1);
  for (std::size_t k = 1; k < workers; ++k) threads.emplace_back(run, k);
  run(0);
  for (auto& t : threads) t.join();

  std::size_t first = kNone;
  std::size_t owner = 0;
  for (std::size_t k = 0; k < workers; ++k) {
    if (failed_at[k] < first) {
      first = failed_at[k];
      owner = k;
    }
  }
  if (first != kNone) std::rethrow_exception(errors[owner]);
}

}  // namespace qbf
