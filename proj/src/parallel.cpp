#include "fraccap/parallel.hpp"

#include <atomic>
#include <cstdlib>

namespace fraccap {

int max_threads() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  const char* env = std::getenv("FRACCAP_THREADS");
  if (env != nullptr) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1 && v < 1024) {
      return static_cast<int>(v) < hw ? static_cast<int>(v) : hw;
    }
  }
  return hw;
}

void parallel_for_chunks(int n_chunks, const std::function<void(int)>& fn) {
  if (n_chunks <= 0) return;
  int workers = max_threads();
  if (workers > n_chunks) workers = n_chunks;
  if (workers <= 1) {
    for (int c = 0; c < n_chunks; ++c) fn(c);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        int c = next.fetch_add(1);
        if (c >= n_chunks) break;
        fn(c);
      }
    });
  }
  for (auto& t : pool) t.join();
}

IndexRange chunk_range(std::int64_t n, int n_chunks, int chunk) {
  IndexRange r;
  if (n_chunks <= 0 || n <= 0) return r;
  std::int64_t base = n / n_chunks;
  std::int64_t rem = n % n_chunks;
  r.begin = chunk * base + (chunk < rem ? chunk : rem);
  r.end = r.begin + base + (chunk < rem ? 1 : 0);
  return r;
}

}  // namespace fraccap
