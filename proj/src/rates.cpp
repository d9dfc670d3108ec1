#include "maxdens/rates.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "maxdens/errors.hpp"

namespace maxdens {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational parse_rational(std::string_view s) {
  auto parse_int = [&](std::string_view t) {
    long long v = 0;
    if (!t.empty() && t.front() == '+') t.remove_prefix(1);
    auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
      throw ParseError("not a rational: '" + std::string(s) + "'");
    return v;
  };
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(s));
  const long long den = parse_int(s.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
  return Rational(parse_int(s.substr(0, slash)), den);
}

Rational to_rational(double x, long long max_den) {
  if (!std::isfinite(x)) throw DomainError("cannot convert a non-finite value to a rational");
  // convergents h/k of the continued fraction of x
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int i = 0; i < 64; ++i) {
    const double a = std::floor(r);
    if (std::abs(a) > 1e15) break;
    const auto ai = static_cast<long long>(a);
    const long long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    const double frac = r - a;
    if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - x) <= 1e-12 * std::max(1.0, std::abs(x)) ||
        frac == 0.0)
      break;
    r = 1.0 / frac;
  }
  return Rational(h1, k1);
}

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::pe: return "pe";
    case EstimatorKind::ne1: return "ne1";
    case EstimatorKind::ne2: return "ne2";
  }
  return {};
}

RateExponent RateExponent::from_exponent(Rational value) {
  return value < 0 ? RateExponent(value) : inconsistent();
}

RateExponent RateExponent::parse(std::string_view s) {
  if (s == "--" || s == "-") return inconsistent();
  return RateExponent(parse_rational(s));
}

std::string RateExponent::str() const { return value_ ? to_string(*value_) : "--"; }

const RateExponent& RateExponents::operator[](EstimatorKind kind) const {
  switch (kind) {
    case EstimatorKind::pe: return pe;
    case EstimatorKind::ne1: return ne1;
    case EstimatorKind::ne2: return ne2;
  }
  return pe;
}

namespace {

// PE: m^{-2 gamma} (N^{-1} m^{2 - 4 beta'} + m^{-2 gamma beta'} + m^{-2} + N^{-1}),
// beta' = beta (Hall) or -sigma (bounded); the slowest term dominates.
RateExponent pe_exponent(const RateRow& row, const Rational& rho) {
  const Rational one(1);
  if (row.tag == TailTag::weibull) return RateExponent::inconsistent();
  Rational b;
  if (row.tag == TailTag::hall) {
    b = row.second;
    // lambda_n = m^{1 - 2 beta} must stay bounded
    if (b < Rational(1, 2)) return RateExponent::inconsistent();
  } else {
    if (row.first >= -2) return RateExponent::inconsistent();  // Fisher information needs gamma > -1/2
    if (row.second > Rational(-1, 2)) return RateExponent::inconsistent();
    if (row.gamma <= -(one - rho) / (2 * rho)) return RateExponent::inconsistent();
    b = -row.second;
  }
  const Rational g = row.gamma;
  const Rational terms[] = {(rho - one) + rho * (2 - 4 * b), -2 * g * b * rho, -2 * rho, rho - one};
  const Rational slowest = *std::max_element(std::begin(terms), std::end(terms));
  return RateExponent::from_exponent(-2 * g * rho + slowest);
}

RateExponent ne1_exponent(const RateRow& row, const Rational& rho) {
  return RateExponent::from_exponent(-2 * row.gamma * rho + Rational(4, 5) * (rho - 1));
}

RateExponent ne2_exponent(const RateRow& row, const Rational& rho) {
  return RateExponent::from_exponent(Rational(-6, 5) * row.gamma * rho + Rational(4, 5) * (2 * rho - 1));
}

RateExponent shift(const RateExponent& e, const Rational& by) {
  return e.consistent() ? RateExponent::from_exponent(e.value() + by) : e;
}

void check_rho(const Rational& rho) {
  if (!(rho > 0 && rho < 1)) throw DomainError("rate exponents need 0 < rho < 1");
}

}  // namespace

RateExponents rate_exponents(const RateRow& row, const Rational& rho) {
  check_rho(rho);
  return {pe_exponent(row, rho), ne1_exponent(row, rho), ne2_exponent(row, rho)};
}

RateExponents normalized_rate_exponents(const RateRow& row, const Rational& rho) {
  const RateExponents raw = rate_exponents(row, rho);
  const Rational by = row.gamma * rho;
  return {shift(raw.pe, by), shift(raw.ne1, by), shift(raw.ne2, by)};
}

}  // namespace maxdens
