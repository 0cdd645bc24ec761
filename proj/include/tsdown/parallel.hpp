#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace tsdown {

/// Number of hardware threads, never less than 1.
inline std::size_t hardware_threads() noexcept {
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Calls fn(begin, end) on up to `threads` contiguous chunks of [0, count).
/// Chunk 0 runs on the calling thread. fn must not throw.
template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  if (count == 0) return;
  threads = std::clamp<std::size_t>(threads, 1, count);
  if (threads == 1) {
    fn(std::size_t{0}, count);
    return;
  }
  auto chunk_begin = [&](std::size_t t) { return t * count / threads; };
  std::vector<std::jthread> workers;
  workers.reserve(threads - 1);
  for (std::size_t t = 1; t < threads; ++t) {
    workers.emplace_back([&fn, b = chunk_begin(t), e = chunk_begin(t + 1)] { fn(b, e); });
  }
  fn(chunk_begin(0), chunk_begin(1));
}

}  // namespace tsdown
