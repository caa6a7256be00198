#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace imbed {

// Runs fn(begin, end) over `jobs` contiguous chunks of [0, n) and returns the
// per-chunk results in chunk order, so merged output does not depend on
// scheduling. The first exception (by chunk order) is rethrown.
template <typename Result, typename Fn>
std::vector<Result> parallel_chunks(std::size_t n, std::size_t jobs, Fn fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (n == 0) return {};
  std::vector<Result> results(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  auto run = [&](std::size_t chunk) {
    const std::size_t begin = n * chunk / jobs;
    const std::size_t end = n * (chunk + 1) / jobs;
    try {
      results[chunk] = fn(begin, end);
    } catch (...) {
      errors[chunk] = std::current_exception();
    }
  };
  if (jobs == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(jobs);
    for (std::size_t c = 0; c < jobs; ++c) threads.emplace_back(run, c);
    for (auto& t : threads) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace imbed
