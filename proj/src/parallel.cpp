#include "brl/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace brl {

int configure_threads_from_env() {
  if (const char* env = std::getenv("BRL_THREADS")) {
    try {
      int n = std::stoi(env);
      if (n > 0) omp_set_num_threads(n);
    } catch (...) {
      // ignore malformed values, fall back to the OpenMP default
    }
  }
  return omp_get_max_threads();
}

int worker_count() { return omp_get_max_threads(); }

namespace detail {

void parallel_for_indices(std::size_t n, void (*body)(std::size_t, void*),
                          void* ctx) {
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < count; ++i) body(static_cast<std::size_t>(i), ctx);
}

}  // namespace detail
}  // namespace brl
