#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace stnkey {

/// Runs body(i) for i in [0, count) across the given number of threads.
/// Callers keep determinism by writing only to slot i of pre-sized storage.
inline void parallel_for(std::size_t count, unsigned threads,
                         const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const std::size_t n_workers = std::min<std::size_t>(threads, count);
  std::vector<std::thread> workers;
  workers.reserve(n_workers);
  for (std::size_t w = 0; w < n_workers; ++w) {
    workers.emplace_back([&, w]() {
      for (std::size_t i = w; i < count; i += n_workers) body(i);
    });
  }
  for (auto& t : workers) t.join();
}

}  // namespace stnkey
