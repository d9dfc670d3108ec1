#include "maxdens/kde_ops.hpp"

#include "maxdens/errors.hpp"

namespace maxdens::reference {

namespace {
void check_inputs(std::span<const double> sample, double h) {
  if (sample.empty()) throw DomainError("kernel sums need at least one observation");
  if (!(h > 0.0)) throw DomainError("bandwidth must be positive");
}
}  // namespace

std::vector<double> kde_density(std::span<const double> sample, double h, const KernelSpec& kernel,
                                std::span<const double> xs) {
  check_inputs(sample, h);
  const double n = static_cast<double>(sample.size());
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) {
    double s = 0.0;
    for (double xi : sample) s += kernel.k((x - xi) / h);
    out.push_back(s / (n * h));
  }
  return out;
}

std::vector<double> kde_cdf(std::span<const double> sample, double h, const KernelSpec& kernel,
                            std::span<const double> xs) {
  check_inputs(sample, h);
  const double n = static_cast<double>(sample.size());
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) {
    double s = 0.0;
    for (double xi : sample) s += kernel.K((x - xi) / h);
    out.push_back(s / n);
  }
  return out;
}

std::vector<double> kde_derivative(std::span<const double> sample, double h, const KernelSpec& kernel,
                                   std::span<const double> xs) {
  check_inputs(sample, h);
  const double n = static_cast<double>(sample.size());
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) {
    double s = 0.0;
    for (double xi : sample) s += kernel.dk((x - xi) / h);
    out.push_back(s / (n * h * h));
  }
  return out;
}

}  // namespace maxdens::reference
