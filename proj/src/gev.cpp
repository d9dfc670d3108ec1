#include "maxdens/gev.hpp"

#include <cmath>
#include <limits>

#include "maxdens/errors.hpp"
#include "maxdens/rng.hpp"

namespace maxdens {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool is_gumbel(double gamma) { return std::abs(gamma) < kGammaSwitch; }
}  // namespace

void GevParams::validate() const {
  if (!std::isfinite(gamma) || !std::isfinite(a) || !std::isfinite(b) || !(a > 0))
    throw DomainError("GEV parameters require finite values and a > 0");
}

bool GevParams::in_support(double x) const {
  if (is_gumbel(gamma)) return std::isfinite(x);
  return 1.0 + gamma * (x - b) / a > 0.0;
}

double gev_standard_pdf(double gamma, double z) {
  if (std::isnan(z)) return std::numeric_limits<double>::quiet_NaN();
  if (is_gumbel(gamma)) {
    if (std::isinf(z)) return 0.0;
    return std::exp(-z - std::exp(-z));
  }
  const double gz = gamma * z;
  if (!(gz > -1.0) || std::isinf(z)) return 0.0;
  const double lt = std::log1p(gz);
  return std::exp(-(1.0 / gamma + 1.0) * lt - std::exp(-lt / gamma));
}

double gev_logpdf(const GevParams& p, double x) {
  const double z = (x - p.b) / p.a;
  if (is_gumbel(p.gamma)) {
    if (!std::isfinite(z)) return kNegInf;
    return -std::log(p.a) - z - std::exp(-z);
  }
  const double gz = p.gamma * z;
  if (!(gz > -1.0) || std::isinf(z)) return kNegInf;
  const double lt = std::log1p(gz);
  return -std::log(p.a) - (1.0 / p.gamma + 1.0) * lt - std::exp(-lt / p.gamma);
}

double gev_pdf(const GevParams& p, double x) {
  return gev_standard_pdf(p.gamma, (x - p.b) / p.a) / p.a;
}

double gev_cdf(const GevParams& p, double x) {
  const double z = (x - p.b) / p.a;
  if (is_gumbel(p.gamma)) return std::exp(-std::exp(-z));
  const double gz = p.gamma * z;
  if (!(gz > -1.0)) return p.gamma > 0 ? 0.0 : 1.0;
  return std::exp(-std::exp(-std::log1p(gz) / p.gamma));
}

double gev_quantile(const GevParams& p, double q) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("GEV quantile requires 0 < q < 1");
  const double e = -std::log(q);
  if (is_gumbel(p.gamma)) return p.b - p.a * std::log(e);
  return p.b + p.a * std::expm1(-p.gamma * std::log(e)) / p.gamma;
}

std::vector<double> gev_sample(const GevParams& p, std::size_t n, std::uint64_t seed) {
  p.validate();
  if (n == 0) throw DomainError("sample size must be at least 1");
  UniformStream stream(seed);
  std::vector<double> out(n);
  for (auto& x : out) x = gev_quantile(p, stream.next());
  return out;
}

GevParams norming_constants(const TailClass& tail, double m) {
  if (!(m >= 1.0)) throw DomainError("norming constants require m >= 1");
  switch (tail.tag()) {
    case TailTag::hall: {
      const auto& h = tail.hall();
      const double g = 1.0 / h.alpha;
      const double s = std::pow(h.A * m, g);
      return {g, g * s, s};
    }
    case TailTag::weibull: {
      const auto& w = tail.weibull();
      const double theta = 1.0 - 1.0 / w.kappa;
      const double lm = std::log(m);
      if (!(lm > 0.0)) throw DomainError("Weibull norming constants require m > 1");
      const double a = std::pow(w.C, -1.0 / w.kappa) * std::pow(lm, -theta) / w.kappa;
      const double b = std::pow(lm / w.C, 1.0 / w.kappa);
      return {0.0, a, b};
    }
    case TailTag::bounded: {
      const auto& bd = tail.bounded();
      const double g = 1.0 / bd.mu;
      const double s = std::pow(bd.D * m, g);
      return {g, -g * s, bd.xstar - s};
    }
  }
  return {};
}

}  // namespace maxdens
