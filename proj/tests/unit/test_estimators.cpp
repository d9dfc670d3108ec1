#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "maxdens/errors.hpp"
#include "maxdens/estimators.hpp"
#include "maxdens/kde_ops.hpp"
#include "maxdens/rng.hpp"

using namespace maxdens;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi); }

}  // namespace

TEST_CASE("block maxima", "[estimators]") {
  const std::vector<double> x{1, 5, 2, 4};
  CHECK(block_maxima(x, 2).blocks == std::vector<double>{5, 4});
  CHECK(block_maxima(x, 1).blocks == x);
  CHECK(block_maxima(x, 4).blocks == std::vector<double>{5});
  CHECK_THROWS_AS(block_maxima(x, 3), NonDivisibleBlock);
  CHECK_THROWS_AS(block_maxima(x, 0), DomainError);
}

TEST_CASE("parametric estimate", "[estimators]") {
  const GevParams p{0.5, 2.0, 1.0};
  CHECK(pe_density(p, 4, 4, 3.0) == gev_pdf(p, 3.0));
  CHECK(pe_density(p, 4, 4, 1.0 - 2.0 / 0.5 - 1e-9) == 0.0);
  // max-stability: the rescaled law is the law of the maximum of m/k block maxima
  const auto q = rescale_gev(p, 16, 4);
  for (double x : {2.0, 5.0, 20.0}) CHECK_THAT(gev_cdf(q, x), WithinRel(std::pow(gev_cdf(p, x), 4.0), 1e-12));
  const auto g = rescale_gev({0.0, 1.0, 0.0}, 8, 2);
  CHECK_THAT(gev_cdf(g, 1.3), WithinRel(std::pow(gev_cdf({0.0, 1.0, 0.0}, 1.3), 4.0), 1e-12));
  CHECK(pe_density(p, 16, 4, 5.0, true) == gev_pdf(q, 5.0));
}

TEST_CASE("plug-in kernel estimate", "[estimators]") {
  const std::vector<double> two{0.0, 2.0};
  const auto g = KernelSpec::gaussian();
  CHECK_THAT(ne1_density(two, 1, 1, g, g, 2, 1.0), WithinAbs(phi(1.0), 1e-15));

  UniformStream u(3);
  std::vector<double> x(400);
  for (auto& v : x) v = 1.0 / u.next();
  std::vector<double> pts(100);
  for (auto& v : pts) v = 10.0 * u.next();
  const auto kde = reference::kde_density(x, 0.4, g, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK_THAT(ne1_density(x, 0.4, 0.9, g, g, 1, pts[i]), WithinAbs(kde[i], 1e-12));

  auto perm = x;
  std::reverse(perm.begin(), perm.end());
  std::rotate(perm.begin(), perm.begin() + 37, perm.end());
  for (double p : {1.5, 3.0, 8.0}) CHECK_THAT(ne1_density(perm, 0.4, 0.3, g, g, 5, p), WithinRel(ne1_density(x, 0.4, 0.3, g, g, 5, p), 1e-12));
  CHECK_THROWS_AS(ne1_density(x, 0.0, 1.0, g, g, 2, 1.0), DomainError);
}

TEST_CASE("block-maxima kernel estimate", "[estimators]") {
  const BlockMaxima one{{0.0}, 1};
  CHECK_THAT(ne2_density(one, 1.0, KernelSpec::gaussian(), 0.0), WithinAbs(0.398942, 1e-6));

  const auto model = TailModel::weibull(1);
  const auto x = model.sample(4096, 99);
  FitRequest req;
  req.kind = EstimatorKind::ne2;
  req.selector = Selector::cv;
  req.m = 64;
  const auto fitted = fit_estimator(x, req);
  CHECK(fitted.fit.kind() == EstimatorKind::ne2);
  const auto bm = block_maxima(x, 64);
  CHECK(bm.n_blocks() == 64);
  const double lo = *std::min_element(bm.blocks.begin(), bm.blocks.end()) - 10 * fitted.fit.h();
  const double hi = *std::max_element(bm.blocks.begin(), bm.blocks.end()) + 10 * fitted.fit.h();
  const int steps = 20000;
  double mass = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
    mass += w * fitted.fit(lo + (hi - lo) * i / steps);
  }
  mass *= (hi - lo) / steps;
  CHECK_THAT(mass, WithinAbs(1.0, 1e-6));

  req.m = 1;
  const auto small = std::vector<double>(x.begin(), x.begin() + 256);
  const auto raw = fit_estimator(small, req);
  const double pts[] = {0.1, 0.5, 2.0};
  auto sorted = small;
  std::sort(sorted.begin(), sorted.end());
  const auto kde = kde_density(sorted, raw.fit.h(), KernelSpec::gaussian(), pts);
  for (int i = 0; i < 3; ++i) CHECK_THAT(raw.fit(pts[i]), WithinAbs(kde[i], 1e-12));

  req.m = 4096;
  CHECK_THROWS_AS(fit_estimator(x, req), InsufficientBlocks);
}

TEST_CASE("fit requests", "[estimators]") {
  const auto model = TailModel::pareto(1);
  const auto x = model.sample(1024, 4);
  FitRequest req;
  req.model = &model;
  req.m = 32;

  req.kind = EstimatorKind::pe;
  const auto pe = fit_estimator(x, req);
  CHECK(pe.selections.empty());
  CHECK_THAT(pe.fit.gev().gamma, WithinAbs(1.0, 0.35));

  req.kind = EstimatorKind::ne1;
  req.selector = Selector::oracle;
  const auto ne1 = fit_estimator(x, req);
  REQUIRE(ne1.selections.size() == 2);
  CHECK(ne1.fit.h1() == ne1.selections[0].value);
  CHECK(ne1.fit.h2() == ne1.selections[1].value);
  CHECK(ne1.fit(30.0) > 0.0);

  req.selector = Selector::pi;
  CHECK(fit_estimator(x, req).selections.size() == 2);

  req.model = nullptr;
  req.selector = Selector::oracle;
  CHECK_THROWS_AS(fit_estimator(x, req), DomainError);

  req.kind = EstimatorKind::pe;
  req.m = 3;
  CHECK_THROWS_AS(fit_estimator(x, req), NonDivisibleBlock);

  CHECK(parse_selector("PI") == Selector::pi);
  CHECK(parse_estimator("ne2") == EstimatorKind::ne2);
  CHECK_THROWS_AS(parse_selector("bogus"), ParseError);
}
