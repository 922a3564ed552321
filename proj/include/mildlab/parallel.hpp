#pragma once

#include <cstddef>
#include <functional>

namespace mildlab {

/// Worker cap: the MILDLAB_THREADS environment variable when set (values
/// < 1 mean serial), otherwise the hardware concurrency.
int worker_count();

/// Runs fn(i) for i in [0, n), splitting the range over worker_count()
/// threads.  fn must only write to per-index state; exceptions from workers
/// are rethrown on the calling thread.  Serial when n is small or the cap
/// is 1, so results never depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace mildlab
