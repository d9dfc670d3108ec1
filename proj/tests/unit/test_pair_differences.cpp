#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "maxdens/pair_differences.hpp"
#include "maxdens/rng.hpp"

using namespace maxdens;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("exact pair differences", "[pairs]") {
  const std::vector<double> x{1.0, 4.0, 2.0};
  const PairDifferences pd(x);
  CHECK(pd.exact());
  CHECK(pd.pair_count() == 3.0);
  CHECK(pd.max_difference() == 3.0);
  CHECK_THAT(pd.sum([](double d) { return d; }), WithinAbs(6.0, 1e-15));
  CHECK_THAT(pd.sum([](double d) { return d * d; }), WithinAbs(14.0, 1e-15));
}

TEST_CASE("binned pair differences approximate the exact sums", "[pairs]") {
  UniformStream u(9);
  std::vector<double> x(3000);
  for (auto& v : x) v = -std::log(u.next());
  x[17] = x[18];  // a tie lands in the zero cell
  const PairDifferences exact(x, 1u << 30);
  const PairDifferences binned(x, 1000, 4096);
  REQUIRE(exact.exact());
  REQUIRE_FALSE(binned.exact());
  CHECK(binned.pair_count() == exact.pair_count());
  double wsum = 0.0;
  for (double w : binned.weights()) wsum += w;
  CHECK(wsum == exact.pair_count());
  for (double h : {0.01, 0.1, 1.0}) {
    auto g = [h](double d) { return std::exp(-0.5 * d * d / (h * h)); };
    INFO("h=" << h);
    CHECK_THAT(binned.sum(g), WithinRel(exact.sum(g), 1e-3));
  }
  CHECK_THAT(binned.sum([](double d) { return d; }), WithinRel(exact.sum([](double d) { return d; }), 1e-12));
}

TEST_CASE("constant sample has only zero differences", "[pairs]") {
  const std::vector<double> x(5, 2.5);
  const PairDifferences pd(x);
  CHECK(pd.max_difference() == 0.0);
  CHECK(pd.sum([](double d) { return d == 0.0 ? 1.0 : 0.0; }) == 10.0);
}
