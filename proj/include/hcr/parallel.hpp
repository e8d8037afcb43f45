#pragma once

#include <atomic>
#include <exception>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace hcr {

// Applies the HCR_THREADS cap process-wide. Unset or invalid values leave the
// OpenMP default untouched; without OpenMP this is a no-op.
void init_threads_from_env();

// Number of workers a parallel region will use right now.
int worker_count();

// Pins the worker count (no-op without OpenMP). Benchmarks use this to
// compare thread counts on equal footing.
void set_worker_count(int threads);

// Runs body(i) for i in [0, n) across OpenMP workers. The first exception
// thrown by any iteration is rethrown on the calling thread after the loop;
// later iterations bail out early once a failure is seen.
template <typename Fn>
void parallel_for(int n, Fn&& body) {
  std::atomic<bool> failed{false};
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      body(i);
    } catch (...) {
#pragma omp critical(hcr_parallel_for_error)
      {
        if (!error) error = std::current_exception();
      }
      failed.store(true, std::memory_order_relaxed);
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace hcr
