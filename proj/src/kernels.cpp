#include "maxdens/kernels.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include "maxdens/errors.hpp"

namespace maxdens {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779;
constexpr double kInvSqrtPi = 0.5641895835477562869;
// phi(9.5) ~ 1e-20, far below double resolution of the sums it feeds
constexpr double kGaussCutoff = 9.5;
}  // namespace

KernelSpec KernelSpec::by_name(std::string_view name) {
  std::string lower;
  for (char c : name) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "gaussian" || lower == "normal") return gaussian();
  if (lower == "epanechnikov" || lower == "epa") return epanechnikov();
  throw ParseError("unknown kernel '" + std::string(name) + "'");
}

KernelSpec KernelSpec::for_tail(const TailClass& tail) {
  return tail.tag() == TailTag::bounded ? epanechnikov() : gaussian();
}

std::string KernelSpec::name() const {
  return kind_ == KernelKind::gaussian ? "gaussian" : "epanechnikov";
}

double KernelSpec::k(double z) const {
  if (kind_ == KernelKind::gaussian) return kInvSqrt2Pi * std::exp(-0.5 * z * z);
  return std::abs(z) < 1.0 ? 0.75 * (1.0 - z * z) : 0.0;
}

double KernelSpec::K(double z) const {
  if (kind_ == KernelKind::gaussian) return 0.5 * std::erfc(-z * std::numbers::sqrt2 / 2);
  if (z <= -1.0) return 0.0;
  if (z >= 1.0) return 1.0;
  return 0.5 + 0.75 * z - 0.25 * z * z * z;
}

double KernelSpec::dk(double z) const {
  if (kind_ == KernelKind::gaussian) return -z * kInvSqrt2Pi * std::exp(-0.5 * z * z);
  return std::abs(z) < 1.0 ? -1.5 * z : 0.0;
}

double KernelSpec::conv(double u) const {
  if (kind_ == KernelKind::gaussian) return 0.5 * kInvSqrtPi * std::exp(-0.25 * u * u);
  const double a = std::abs(u);
  if (a >= 2.0) return 0.0;
  const double t = 2.0 - a;
  return 3.0 / 160.0 * t * t * t * (a * a + 6.0 * a + 4.0);
}

KernelMoments KernelSpec::moments() const {
  if (kind_ == KernelKind::gaussian) return {1.0, 0.5 * kInvSqrtPi, 0.5 * kInvSqrtPi};
  return {0.2, 0.6, 9.0 / 70.0};
}

double KernelSpec::support_radius() const {
  return kind_ == KernelKind::gaussian ? std::numeric_limits<double>::infinity() : 1.0;
}

double KernelSpec::cutoff() const {
  return kind_ == KernelKind::gaussian ? kGaussCutoff : 1.0;
}

KernelMoments moments(const KernelSpec& kernel) { return kernel.moments(); }

}  // namespace maxdens
