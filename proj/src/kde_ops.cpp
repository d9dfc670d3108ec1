#include "maxdens/kde_ops.hpp"

#include <algorithm>

#include "maxdens/errors.hpp"

namespace maxdens {

namespace {

void check_inputs(std::span<const double> sorted, double h) {
  if (sorted.empty()) throw DomainError("kernel sums need at least one observation");
  if (!(h > 0.0)) throw DomainError("bandwidth must be positive");
  if (!std::is_sorted(sorted.begin(), sorted.end()))
    throw DomainError("kernel sums expect a sorted sample");
}

struct Window {
  std::size_t lo;
  std::size_t hi;
};

Window window(std::span<const double> sorted, double x, double radius) {
  const auto lo = std::lower_bound(sorted.begin(), sorted.end(), x - radius);
  const auto hi = std::upper_bound(lo, sorted.end(), x + radius);
  return {static_cast<std::size_t>(lo - sorted.begin()), static_cast<std::size_t>(hi - sorted.begin())};
}

}  // namespace

std::vector<double> kde_density(std::span<const double> sorted, double h, const KernelSpec& kernel,
                                std::span<const double> xs) {
  check_inputs(sorted, h);
  const double radius = kernel.cutoff() * h;
  const double norm = 1.0 / (static_cast<double>(sorted.size()) * h);
  std::vector<double> out(xs.size());
  const long count = static_cast<long>(xs.size());
#pragma omp parallel for schedule(static)
  for (long g = 0; g < count; ++g) {
    const double x = xs[static_cast<std::size_t>(g)];
    const auto w = window(sorted, x, radius);
    double s = 0.0;
    for (std::size_t i = w.lo; i < w.hi; ++i) s += kernel.k((x - sorted[i]) / h);
    out[static_cast<std::size_t>(g)] = s * norm;
  }
  return out;
}

std::vector<double> kde_cdf(std::span<const double> sorted, double h, const KernelSpec& kernel,
                            std::span<const double> xs) {
  check_inputs(sorted, h);
  const double radius = kernel.cutoff() * h;
  const double inv_n = 1.0 / static_cast<double>(sorted.size());
  std::vector<double> out(xs.size());
  const long count = static_cast<long>(xs.size());
#pragma omp parallel for schedule(static)
  for (long g = 0; g < count; ++g) {
    const double x = xs[static_cast<std::size_t>(g)];
    const auto w = window(sorted, x, radius);
    double s = 0.0;
    for (std::size_t i = w.lo; i < w.hi; ++i) s += kernel.K((x - sorted[i]) / h);
    out[static_cast<std::size_t>(g)] = (static_cast<double>(w.lo) + s) * inv_n;
  }
  return out;
}

std::vector<double> kde_derivative(std::span<const double> sorted, double h, const KernelSpec& kernel,
                                   std::span<const double> xs) {
  check_inputs(sorted, h);
  const double radius = kernel.cutoff() * h;
  const double norm = 1.0 / (static_cast<double>(sorted.size()) * h * h);
  std::vector<double> out(xs.size());
  const long count = static_cast<long>(xs.size());
#pragma omp parallel for schedule(static)
  for (long g = 0; g < count; ++g) {
    const double x = xs[static_cast<std::size_t>(g)];
    const auto w = window(sorted, x, radius);
    double s = 0.0;
    for (std::size_t i = w.lo; i < w.hi; ++i) s += kernel.dk((x - sorted[i]) / h);
    out[static_cast<std::size_t>(g)] = s * norm;
  }
  return out;
}

}  // namespace maxdens
