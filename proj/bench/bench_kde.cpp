// Serial reference kernel sums against the windowed OpenMP versions.
// Thread count follows MAXDENS_THREADS.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "maxdens/kde_ops.hpp"
#include "maxdens/parallel.hpp"
#include "maxdens/tail_models.hpp"

using namespace maxdens;

namespace {

struct Fixture {
  std::vector<double> sample;
  std::vector<double> xs;
  double h;
};

Fixture make(std::size_t n) {
  Fixture f{TailModel::weibull(1).sample(n, 42), std::vector<double>(512), 0.0};
  std::sort(f.sample.begin(), f.sample.end());
  for (std::size_t i = 0; i < f.xs.size(); ++i) f.xs[i] = 6.0 * static_cast<double>(i) / 511.0;
  f.h = 1.06 * std::pow(static_cast<double>(n), -0.2);
  return f;
}

template <auto Op>
void run(benchmark::State& state, const KernelSpec& kernel) {
  configure_threads();
  const auto f = make(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Op(f.sample, f.h, kernel, f.xs));
  state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<long>(f.xs.size()));
}

void density_reference(benchmark::State& s) { run<reference::kde_density>(s, KernelSpec::gaussian()); }
void density_parallel(benchmark::State& s) { run<kde_density>(s, KernelSpec::gaussian()); }
void cdf_reference(benchmark::State& s) { run<reference::kde_cdf>(s, KernelSpec::gaussian()); }
void cdf_parallel(benchmark::State& s) { run<kde_cdf>(s, KernelSpec::gaussian()); }
void epanechnikov_reference(benchmark::State& s) { run<reference::kde_density>(s, KernelSpec::epanechnikov()); }
void epanechnikov_parallel(benchmark::State& s) { run<kde_density>(s, KernelSpec::epanechnikov()); }

}  // namespace

BENCHMARK(density_reference)->RangeMultiplier(4)->Range(1 << 8, 1 << 14)->Unit(benchmark::kMicrosecond);
BENCHMARK(density_parallel)->RangeMultiplier(4)->Range(1 << 8, 1 << 14)->Unit(benchmark::kMicrosecond);
BENCHMARK(cdf_reference)->RangeMultiplier(4)->Range(1 << 8, 1 << 14)->Unit(benchmark::kMicrosecond);
BENCHMARK(cdf_parallel)->RangeMultiplier(4)->Range(1 << 8, 1 << 14)->Unit(benchmark::kMicrosecond);
BENCHMARK(epanechnikov_reference)->RangeMultiplier(4)->Range(1 << 8, 1 << 14)->Unit(benchmark::kMicrosecond);
BENCHMARK(epanechnikov_parallel)->RangeMultiplier(4)->Range(1 << 8, 1 << 14)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
