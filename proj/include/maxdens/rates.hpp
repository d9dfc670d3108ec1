#pragma once

#include <boost/rational.hpp>

#include <optional>
#include <string>
#include <string_view>

#include "maxdens/tail_models.hpp"

namespace maxdens {

using Rational = boost::rational<long long>;

/// "p/q", or "p" for integers.
std::string to_string(const Rational& r);
/// Parses "p", "-p/q"; throws ParseError.
Rational parse_rational(std::string_view s);

/// Best rational approximation with denominator at most max_den (continued fractions).
Rational to_rational(double x, long long max_den = 10000);

enum class EstimatorKind { pe, ne1, ne2 };
std::string to_string(EstimatorKind kind);

/// Exponent of n in a convergence rate; empty when the estimator is not
/// consistent under the regime (a hyphen in the printed tables).
class RateExponent {
 public:
  RateExponent() = default;
  explicit RateExponent(Rational value) : value_(value) {}
  static RateExponent inconsistent() { return RateExponent(); }
  /// Nonnegative exponents mean no convergence and are reported as inconsistent.
  static RateExponent from_exponent(Rational value);
  /// "--" or a fraction.
  static RateExponent parse(std::string_view s);

  bool consistent() const { return value_.has_value(); }
  const Rational& value() const { return *value_; }
  std::string str() const;

  bool operator==(const RateExponent&) const = default;

 private:
  std::optional<Rational> value_;
};

struct RateExponents {
  RateExponent pe;
  RateExponent ne1;
  RateExponent ne2;
  const RateExponent& operator[](EstimatorKind kind) const;
};

/// Exact tail description of one table row: gamma plus the printed
/// first/second order columns (alpha, beta) or (mu, sigma).
struct RateRow {
  Family family;
  std::string label;  // family parameters as printed, e.g. "1/2,3"
  TailTag tag;
  Rational gamma;
  Rational first;   // alpha or mu (0 for the Weibull class)
  Rational second;  // beta or sigma (0 for the Weibull class)
};

/// MSE rate exponents of n for m = n^rho, k = m, N = n^(1 - rho), M_n = K_n = delta.
RateExponents rate_exponents(const RateRow& row, const Rational& rho);

/// The same exponents divided by the order m^{-gamma} of f_(m)(x_n).
RateExponents normalized_rate_exponents(const RateRow& row, const Rational& rho);

}  // namespace maxdens
