#pragma once

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bv {

inline int effective_threads(int requested) {
#ifdef _OPENMP
  return requested <= 0 ? omp_get_max_threads() : requested;
#else
  (void)requested;
  return 1;
#endif
}

// Runs body(i) for i in [0, count).  Bodies must be independent; callers do
// any ordered reduction themselves so results never depend on scheduling.
template <class Body>
void parallel_for(int threads, std::int64_t count, Body&& body) {
#ifdef _OPENMP
  const int t = effective_threads(threads);
  if (t > 1) {
#pragma omp parallel for num_threads(t) schedule(dynamic)
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }
#endif
  for (std::int64_t i = 0; i < count; ++i) body(i);
}

}  // namespace bv
