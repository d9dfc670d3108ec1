#pragma once

#include <span>
#include <vector>

#include "maxdens/kernels.hpp"

namespace maxdens {

// Kernel sums evaluated at many points. `sorted` must be in ascending order;
// only observations within kernel.cutoff() * h of a point are visited.
// Evaluation points are distributed over OpenMP threads; each value is
// computed by one thread, so results do not depend on the thread count.

/// f(x; h) = (n h)^{-1} sum k((x - X_i) / h).
std::vector<double> kde_density(std::span<const double> sorted, double h, const KernelSpec& kernel,
                                std::span<const double> xs);
/// F(x; h) = n^{-1} sum K((x - X_i) / h).
std::vector<double> kde_cdf(std::span<const double> sorted, double h, const KernelSpec& kernel,
                            std::span<const double> xs);
/// f'(x; h) = (n h^2)^{-1} sum k'((x - X_i) / h).
std::vector<double> kde_derivative(std::span<const double> sorted, double h, const KernelSpec& kernel,
                                   std::span<const double> xs);

/// Plain serial implementations summing over every observation, in input order.
/// Kept as the baseline for tests and benchmarks; the input need not be sorted.
namespace reference {
std::vector<double> kde_density(std::span<const double> sample, double h, const KernelSpec& kernel,
                                std::span<const double> xs);
std::vector<double> kde_cdf(std::span<const double> sample, double h, const KernelSpec& kernel,
                            std::span<const double> xs);
std::vector<double> kde_derivative(std::span<const double> sample, double h, const KernelSpec& kernel,
                                   std::span<const double> xs);
}  // namespace reference

}  // namespace maxdens
