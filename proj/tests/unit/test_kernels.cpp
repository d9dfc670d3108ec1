#include <catch_amalgamated.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>

#include "maxdens/errors.hpp"
#include "maxdens/kernels.hpp"

using namespace maxdens;
using Catch::Matchers::WithinAbs;

namespace {

template <class F>
double over_support(const KernelSpec& kernel, F f, double radius) {
  boost::math::quadrature::tanh_sinh<double> ts;
  if (std::isinf(radius)) {
    const double inf = std::numeric_limits<double>::infinity();
    return ts.integrate(f, -inf, 0.0, 1e-14) + ts.integrate(f, 0.0, inf, 1e-14);
  }
  (void)kernel;
  return ts.integrate(f, -radius, 0.0, 1e-14) + ts.integrate(f, 0.0, radius, 1e-14);
}

}  // namespace

TEST_CASE("kernel constants match quadrature", "[kernels]") {
  for (const auto& kernel : {KernelSpec::gaussian(), KernelSpec::epanechnikov()}) {
    const double R = kernel.support_radius();
    INFO(kernel.name());
    CHECK_THAT(over_support(kernel, [&](double z) { return kernel.k(z); }, R), WithinAbs(1.0, 1e-10));
    CHECK_THAT(over_support(kernel, [&](double z) { return z * z * kernel.k(z); }, R), WithinAbs(kernel.m2(), 1e-10));
    CHECK_THAT(over_support(kernel, [&](double z) { return kernel.k(z) * kernel.k(z); }, R), WithinAbs(kernel.r(), 1e-10));
    CHECK_THAT(over_support(kernel, [&](double z) { return z * kernel.K(z) * kernel.k(z); }, R),
               WithinAbs(kernel.s(), 1e-10));
  }
  CHECK(KernelSpec::gaussian().m2() == 1.0);
  CHECK_THAT(KernelSpec::epanechnikov().m2(), WithinAbs(0.2, 1e-15));
  CHECK_THAT(KernelSpec::gaussian().r(), WithinAbs(0.2821, 1e-4));
}

TEST_CASE("kernel distribution function and derivative", "[kernels]") {
  for (const auto& kernel : {KernelSpec::gaussian(), KernelSpec::epanechnikov()}) {
    for (double z : {0.0, 0.3, 0.9, 1.5, 4.0}) {
      CHECK_THAT(kernel.K(z) + kernel.K(-z), WithinAbs(1.0, 1e-15));
      CHECK(kernel.k(z) == kernel.k(-z));
      const double e = 1e-6;
      if (std::abs(std::abs(z) - 1.0) > 0.01 || kernel.kind() == KernelKind::gaussian) {
        CHECK_THAT((kernel.K(z + e) - kernel.K(z - e)) / (2 * e), WithinAbs(kernel.k(z), 1e-8));
        CHECK_THAT((kernel.k(z + e) - kernel.k(z - e)) / (2 * e), WithinAbs(kernel.dk(z), 1e-7));
      }
    }
  }
  CHECK(KernelSpec::epanechnikov().k(1.2) == 0.0);
  CHECK(KernelSpec::epanechnikov().K(1.2) == 1.0);
}

TEST_CASE("self-convolution matches quadrature", "[kernels]") {
  boost::math::quadrature::gauss_kronrod<double, 31> gk;
  for (const auto& kernel : {KernelSpec::gaussian(), KernelSpec::epanechnikov()}) {
    for (double u : {0.0, 0.4, 1.0, 1.7, 2.5}) {
      auto f = [&](double z) { return kernel.k(z) * kernel.k(u - z); };
      double v = 0.0;
      if (kernel.kind() == KernelKind::gaussian) {
        v = gk.integrate(f, -12.0, 12.0, 15, 1e-14);
      } else if (u < 2.0) {
        v = gk.integrate(f, u - 1.0, 1.0, 15, 1e-14);
      }
      INFO(kernel.name() << " u=" << u);
      CHECK_THAT(kernel.conv(u), WithinAbs(v, 1e-12));
      CHECK(kernel.conv(u) == kernel.conv(-u));
    }
  }
  CHECK_THAT(KernelSpec::gaussian().conv(0.0), WithinAbs(1.0 / (2.0 * std::sqrt(std::numbers::pi)), 1e-15));
}

TEST_CASE("kernel lookup", "[kernels]") {
  CHECK(KernelSpec::by_name("Gaussian") == KernelSpec::gaussian());
  CHECK(KernelSpec::by_name("epanechnikov") == KernelSpec::epanechnikov());
  CHECK_THROWS_AS(KernelSpec::by_name("box"), ParseError);
  CHECK(KernelSpec::for_tail(TailClass(BoundedTail{-1, -1, 1, 1, 1})) == KernelSpec::epanechnikov());
  CHECK(KernelSpec::for_tail(TailClass(WeibullTail{1, 1})) == KernelSpec::gaussian());
}
