#pragma once

#include <cstdint>
#include <vector>

#include "maxdens/tail_models.hpp"

namespace maxdens {

/// Below this |gamma| every GEV formula switches to the Gumbel branch.
inline constexpr double kGammaSwitch = 1e-8;

/// Shape, scale and location of a generalized extreme value law.
struct GevParams {
  double gamma = 0.0;
  double a = 1.0;
  double b = 0.0;

  /// Throws DomainError unless a > 0 and all fields are finite.
  void validate() const;
  /// True when 1 + gamma (x - b) / a > 0 (always true in the Gumbel case).
  bool in_support(double x) const;
};

/// Standard GEV density g_gamma(z).
double gev_standard_pdf(double gamma, double z);

double gev_pdf(const GevParams& p, double x);
/// log density; -inf outside the support.
double gev_logpdf(const GevParams& p, double x);
double gev_cdf(const GevParams& p, double x);
double gev_quantile(const GevParams& p, double q);
/// n draws by inversion from the stream keyed by `seed`.
std::vector<double> gev_sample(const GevParams& p, std::size_t n, std::uint64_t seed);

/// Norming constants (gamma, a_m, b_m) of the tail class at horizon m.
/// m is real so that the constants can be inspected at non-integer horizons.
GevParams norming_constants(const TailClass& tail, double m);

}  // namespace maxdens
