#ifndef LOGCAVE_PARALLEL_HPP
#define LOGCAVE_PARALLEL_HPP

#include <cstddef>
#include <cstdlib>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace logcave {

// Thread budget for the harness kernels: OpenMP's maximum, optionally
// capped by the LOGCAVE_THREADS environment variable. Returns 1 when
// built without OpenMP.
inline int harness_threads() {
#ifdef _OPENMP
  int n = omp_get_max_threads();
#else
  int n = 1;
#endif
  if (const char* cap = std::getenv("LOGCAVE_THREADS")) {
    int c = std::atoi(cap);
    if (c >= 1 && c < n) n = c;
  }
  return n;
}

// Serial reference loop. Kept as the baseline the parallel kernel is
// tested and benchmarked against.
template <class Body>
void serial_for(std::size_t n, Body&& body) {
  for (std::size_t i = 0; i < n; ++i) body(i);
}

// Data-parallel loop over independent iterations. body(i) must not touch
// shared mutable state; every call site writes to per-index slots. With
// per-index work derived deterministically (e.g. replicate-seeded RNGs),
// results are identical to serial_for regardless of thread count.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
#ifdef _OPENMP
  const int threads = harness_threads();
  if (threads > 1 && n > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      body(static_cast<std::size_t>(i));
    return;
  }
#endif
  serial_for(n, std::forward<Body>(body));
}

}  // namespace logcave

#endif
