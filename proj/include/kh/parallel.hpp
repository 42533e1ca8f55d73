#pragma once
#include <tbb/info.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

#include <algorithm>
#include <cstddef>

namespace kh {

// Runs f(0..n-1) on up to `threads` workers.
template <class F>
void run_parallel(int threads, size_t n, F&& f) {
  threads = std::min(threads, tbb::info::default_concurrency());
  if (threads <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) f(i);
    return;
  }
  tbb::task_arena arena(threads);
  arena.execute([&] { tbb::parallel_for(size_t(0), n, [&](size_t i) { f(i); }); });
}

}  // namespace kh
