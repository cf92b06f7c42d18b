#include "edsolve/threads.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace eds {

static int g_threads = 0;

void set_thread_count(int count) { g_threads = count < 0 ? 0 : count; }

int thread_count() {
  if (g_threads > 0) return g_threads;
  if (const char* env = std::getenv("EDSOLVE_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_for(int begin, int end, const std::function<void(int)>& body) {
  int total = end - begin;
  int workers = thread_count();
  if (total <= 0) return;
  if (workers <= 1 || total == 1) {
    for (int i = begin; i < end; ++i) body(i);
    return;
  }
  if (workers > total) workers = total;
  std::atomic<int> next(begin);
  std::exception_ptr error;
  std::atomic<bool> failed(false);
  auto run = [&]() {
    while (true) {
      int i = next.fetch_add(1);
      if (i >= end || failed.load()) return;
      try {
        body(i);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failed.load() && error) std::rethrow_exception(error);
}

}  // namespace eds
