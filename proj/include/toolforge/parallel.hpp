#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace toolforge {

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Parallel loop over [0, n). `fn(i)` must be independent across iterations.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    fn(static_cast<std::size_t>(i));
  }
#else
  for (std::size_t i = 0; i < n; ++i) fn(i);
#endif
}

/// Sum of fn(begin, end) over fixed-size chunks of [0, n). The chunk grid is a
/// function of n only and chunk partials are combined in chunk order, so the
/// result is bit-identical for any thread count.
template <typename Fn>
double chunked_sum(std::size_t n, std::size_t chunk, Fn&& fn) {
  if (n == 0) return 0.0;
  if (chunk == 0) chunk = 1;
  const std::size_t nchunks = (n + chunk - 1) / chunk;
  if (nchunks == 1) return fn(std::size_t{0}, n);
  std::vector<double> partial(nchunks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * chunk;
    const std::size_t hi = lo + chunk < n ? lo + chunk : n;
    partial[static_cast<std::size_t>(c)] = fn(lo, hi);
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace toolforge
