#include <catch_amalgamated.hpp>

#include "maxdens/errors.hpp"
#include "maxdens/rate_tables.hpp"
#include "maxdens/rates.hpp"

using namespace maxdens;

namespace {

const ReferenceRateRow& find_row(Family family, const std::string& label) {
  for (const auto& r : reference_rate_rows())
    if (r.row.family == family && r.row.label == label) return r;
  FAIL("row not found: " << label);
  throw;
}

}  // namespace

TEST_CASE("rational helpers", "[rates]") {
  CHECK(to_string(Rational(-11, 10)) == "-11/10");
  CHECK(to_string(Rational(3)) == "3");
  CHECK(parse_rational(" -7/10 ") == Rational(-7, 10));
  CHECK(parse_rational("4/2") == Rational(2));
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("x"), ParseError);
  CHECK(RateExponent::parse("--") == RateExponent::inconsistent());
  CHECK(RateExponent::from_exponent(Rational(0)) == RateExponent::inconsistent());
  CHECK(RateExponent::from_exponent(Rational(1, 5)) == RateExponent::inconsistent());
  CHECK(RateExponent::from_exponent(Rational(-1, 5)).str() == "-1/5");
}

TEST_CASE("anchor rows", "[rates]") {
  const Rational quarter(1, 4);
  const auto p1 = rate_exponents(find_row(Family::pareto, "1").row, quarter);
  CHECK(p1.ne1.value() == Rational(-11, 10));
  CHECK(p1.ne2.value() == Rational(-7, 10));
  const auto ph = rate_exponents(find_row(Family::pareto, "1/2").row, quarter);
  CHECK(ph.ne1.value() == Rational(-8, 5));
  CHECK(ph.ne2.value() == Rational(-1));
  CHECK(rate_exponents(find_row(Family::pareto, "3").row, quarter).pe.value() == Rational(-1, 3));
  for (const auto& label : {"1/2", "1", "3", "10"})
    for (const auto& rho : table_rhos()) CHECK_FALSE(rate_exponents(find_row(Family::weibull, label).row, rho).pe.consistent());
}

TEST_CASE("plug-in estimator is faster than the block-maxima estimator", "[rates]") {
  int checked = 0;
  for (const auto& r : reference_rate_rows()) {
    if (!(r.row.gamma > Rational(-1))) continue;
    for (const auto& rho : table_rhos()) {
      const auto e = rate_exponents(r.row, rho);
      if (!e.ne1.consistent() || !e.ne2.consistent()) continue;
      INFO(r.row.label << " rho=" << to_string(rho));
      CHECK(e.ne1.value() < e.ne2.value());
      ++checked;
    }
  }
  CHECK(checked > 60);
}

TEST_CASE("kernel columns match the printed table", "[rates]") {
  // The Frechet gamma = 5 row prints -11/10 for the block-maxima estimator
  // at rho = 3/4; the exponent is -(6/5) 5 (3/4) + (4/5)(1/2) = -41/10.
  std::vector<std::string> kernel_diffs;
  for (const auto& d : diff_against_reference(false)) {
    if (d.estimator == EstimatorKind::pe) continue;
    kernel_diffs.push_back(d.row->row.label + " " + to_string(d.rho) + " " + to_string(d.estimator) + " " +
                           d.computed.str() + " vs " + d.printed.str());
  }
  for (const auto& s : kernel_diffs) INFO(s);
  REQUIRE(kernel_diffs.size() == 1);
  CHECK(kernel_diffs[0] == "5 3/4 ne2 -41/10 vs -11/10");
}

TEST_CASE("normalization removes the target order once", "[rates]") {
  const auto& row = find_row(Family::pareto, "1").row;
  for (const auto& rho : table_rhos()) {
    const auto raw = rate_exponents(row, rho);
    const auto norm = normalized_rate_exponents(row, rho);
    CHECK(norm.ne1.value() == raw.ne1.value() + row.gamma * rho);
  }
}

TEST_CASE("rows from arbitrary models", "[rates]") {
  CHECK(to_rational(0.75) == Rational(3, 4));
  CHECK(to_rational(-1.0 / 3.0) == Rational(-1, 3));
  CHECK(to_rational(2.0) == Rational(2));
  for (const auto& r : reference_rate_rows()) {
    const auto row = rate_row(row_model(r.row));
    INFO(r.row.label);
    CHECK(row.label == r.row.label);
    CHECK(row.gamma == r.row.gamma);
    CHECK(row.tag == r.row.tag);
    for (const auto& rho : table_rhos()) {
      CHECK(rate_exponents(row, rho).ne1 == rate_exponents(r.row, rho).ne1);
      CHECK(rate_exponents(row, rho).ne2 == rate_exponents(r.row, rho).ne2);
    }
  }
}
