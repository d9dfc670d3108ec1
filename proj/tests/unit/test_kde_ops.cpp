#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "maxdens/kde_ops.hpp"
#include "maxdens/rng.hpp"

using namespace maxdens;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<double> normals(std::size_t n, std::uint64_t seed) {
  UniformStream u(seed);
  std::vector<double> x(n);
  for (auto& v : x) v = std::sqrt(-2 * std::log(u.next())) * std::cos(6.283185307179586 * u.next());
  return x;
}

}  // namespace

TEST_CASE("windowed sums agree with the serial reference", "[kde]") {
  auto sample = normals(3000, 11);
  auto shuffled = sample;
  std::sort(sample.begin(), sample.end());
  std::vector<double> xs;
  for (int i = 0; i <= 300; ++i) xs.push_back(-5 + i / 30.0);
  for (const auto& kernel : {KernelSpec::gaussian(), KernelSpec::epanechnikov()}) {
    for (double h : {0.01, 0.2, 1.5}) {
      const auto f = kde_density(sample, h, kernel, xs);
      const auto fr = reference::kde_density(shuffled, h, kernel, xs);
      const auto F = kde_cdf(sample, h, kernel, xs);
      const auto Fr = reference::kde_cdf(shuffled, h, kernel, xs);
      const auto d = kde_derivative(sample, h, kernel, xs);
      const auto dr = reference::kde_derivative(shuffled, h, kernel, xs);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        INFO(kernel.name() << " h=" << h << " x=" << xs[i]);
        CHECK_THAT(f[i], WithinAbs(fr[i], 1e-12));
        CHECK_THAT(F[i], WithinAbs(Fr[i], 1e-12));
        CHECK_THAT(d[i], WithinAbs(dr[i], 1e-10 / (h * h)));
      }
    }
  }
}

TEST_CASE("kernel estimates have the expected shape", "[kde]") {
  const std::vector<double> one{0.0};
  const std::vector<double> x0{0.0};
  CHECK_THAT(kde_density(one, 1.0, KernelSpec::gaussian(), x0)[0], WithinRel(0.3989422804014327, 1e-14));
  CHECK_THAT(kde_cdf(one, 1.0, KernelSpec::gaussian(), x0)[0], WithinAbs(0.5, 1e-15));
  auto sample = normals(500, 5);
  std::sort(sample.begin(), sample.end());
  std::vector<double> xs;
  for (int i = 0; i <= 2000; ++i) xs.push_back(-8 + i * 0.008);
  const auto f = kde_density(sample, 0.3, KernelSpec::gaussian(), xs);
  double mass = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) mass += 0.5 * (f[i] + f[i - 1]) * 0.008;
  CHECK_THAT(mass, WithinAbs(1.0, 1e-6));
  const auto F = kde_cdf(sample, 0.3, KernelSpec::gaussian(), xs);
  CHECK(std::is_sorted(F.begin(), F.end()));
}
