#pragma once

#include <cstddef>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace vlp {

// Execution mode for the sweep kernels. Every sweep is an independent
// per-index map with results written by index, so the parallel build produces
// bit-identical output to the serial reference regardless of thread count.
enum class Exec { Serial, Parallel };

#if defined(_OPENMP)
inline constexpr bool kHaveOpenMP = true;
#else
inline constexpr bool kHaveOpenMP = false;
#endif

template <class Fn>
void parallel_for(std::size_t n, Exec exec, Fn&& fn) {
  if (exec == Exec::Parallel) {
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      fn(static_cast<std::size_t>(i));
    return;
#endif
  }
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace vlp
