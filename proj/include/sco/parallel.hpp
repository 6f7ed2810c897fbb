#pragma once

#include <future>
#include <thread>
#include <vector>

namespace sco {

/// Evaluate fn(0..n-1) across threads; results gathered in index order so
/// parallel and serial runs produce identical output.
template <typename T, typename Fn>
std::vector<T> parallel_map(size_t n, Fn fn) {
  const size_t workers =
      std::min<size_t>(std::max(1u, std::thread::hardware_concurrency()), n ? n : 1);
  std::vector<T> out(n);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::future<void>> futures;
  futures.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&, w] {
      for (size_t i = w; i < n; i += workers) out[i] = fn(i);
    }));
  }
  for (auto& f : futures) f.get();
  return out;
}

}  // namespace sco
