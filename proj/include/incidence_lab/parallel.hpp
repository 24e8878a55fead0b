#pragma once

#include <cstddef>
#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace incidence_lab {

/// Worker count: INCIDENCE_LAB_THREADS if set and positive, else the
/// hardware concurrency (at least 1).
unsigned default_thread_count();

/// Splits [0, n) into `chunks` contiguous ranges and runs
/// fn(chunk, begin, end) for each, on up to `threads` threads. Chunk
/// boundaries depend only on (n, chunks), so callers that merge per-chunk
/// results in chunk order get output independent of the thread count.
template <class Fn>
void for_each_chunk(std::size_t n, std::size_t chunks, unsigned threads, Fn&& fn) {
  if (chunks == 0) return;
  auto bounds = [&](std::size_t c) { return n * c / chunks; };
  if (threads <= 1 || chunks == 1) {
    for (std::size_t c = 0; c < chunks; ++c) fn(c, bounds(c), bounds(c + 1));
    return;
  }
  std::vector<std::exception_ptr> errors(chunks);
  std::vector<std::thread> pool;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, chunks));
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c < chunks; c += workers) {
        try {
          fn(c, bounds(c), bounds(c + 1));
        } catch (...) {
          errors[c] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace incidence_lab
