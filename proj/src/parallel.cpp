#include "hcr/parallel.hpp"

#include <cstdlib>
#include <string>

namespace hcr {

void init_threads_from_env() {
#if defined(_OPENMP)
  const char* raw = std::getenv("HCR_THREADS");
  if (raw == nullptr || *raw == '\0') return;
  char* end = nullptr;
  const long requested = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || requested < 1) return;
  long threads = requested;
  const long available = omp_get_max_threads();
  if (threads > available) threads = available;
  omp_set_num_threads(static_cast<int>(threads));
#endif
}

int worker_count() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_worker_count(int threads) {
#if defined(_OPENMP)
  if (threads >= 1) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

}  // namespace hcr
