#pragma once

#include <cstddef>

#ifdef QPOLY_HAVE_OPENMP
#include <omp.h>
#endif

namespace qpoly::par {

/// Process-wide switch between the OpenMP kernels and the serial reference
/// path. Tests flip this to check that both produce identical bytes; the
/// benchmark flips it to measure the speedup.
inline bool& parallel_flag() {
  static bool enabled = true;
  return enabled;
}

inline void set_parallel_enabled(bool on) { parallel_flag() = on; }
inline bool parallel_enabled() { return parallel_flag(); }

inline int max_threads() {
#ifdef QPOLY_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Runs f(i) for i in [0, n). Iterations must be independent: each writes
/// only its own slot and draws randomness from its own substream, so the
/// parallel and serial paths produce bit-identical results.
template <typename F>
void for_index(std::size_t n, F&& f) {
#ifdef QPOLY_HAVE_OPENMP
  if (parallel_enabled()) {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      f(static_cast<std::size_t>(i));
    }
    return;
  }
#endif
  for (std::size_t i = 0; i < n; ++i) {
    f(i);
  }
}

}  // namespace qpoly::par
