#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace bilab {

// Splits [0, n) into `jobs` contiguous chunks and calls fn(chunk, begin, end)
// for each, on its own thread when jobs > 1. Chunk boundaries depend only on
// n and jobs, so callers that merge per-chunk results in chunk order get the
// same output for any jobs value as long as they re-sort or the per-element
// work is order independent.
template <class Fn>
void parallel_chunks(std::size_t n, std::size_t jobs, Fn&& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs <= 1) {
    if (n > 0) fn(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> threads;
  threads.reserve(jobs);
  for (std::size_t c = 0; c < jobs; ++c) {
    std::size_t begin = n * c / jobs;
    std::size_t end = n * (c + 1) / jobs;
    threads.emplace_back([&, c, begin, end] {
      try {
        fn(c, begin, end);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline std::size_t chunk_count(std::size_t n, std::size_t jobs) {
  return std::max<std::size_t>(1, std::min(jobs, n));
}

}  // namespace bilab
