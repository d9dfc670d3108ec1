#pragma once

#include <array>
#include <cstddef>
#include <numeric>

namespace maxdens {

/// Worker count for parallel regions: MAXDENS_THREADS if set and positive,
/// otherwise the OpenMP default.
int worker_count();

/// Applies worker_count() to the OpenMP runtime. Safe to call repeatedly.
void configure_threads();

/// Sum of term(i) for i in [0, count). The index range is cut into a fixed
/// number of chunks and the partial sums are added in chunk order, so the
/// result does not depend on the number of threads.
template <class F>
double chunked_sum(std::size_t count, F&& term) {
  constexpr long kChunks = 64;
  std::array<double, kChunks> partial{};
#pragma omp parallel for schedule(static) if (count > 8192)
  for (long c = 0; c < kChunks; ++c) {
    const std::size_t lo = count * static_cast<std::size_t>(c) / kChunks;
    const std::size_t hi = count * static_cast<std::size_t>(c + 1) / kChunks;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[static_cast<std::size_t>(c)] = s;
  }
  return std::accumulate(partial.begin(), partial.end(), 0.0);
}

}  // namespace maxdens
