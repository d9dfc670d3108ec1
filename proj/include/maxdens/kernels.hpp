#pragma once

#include <string>
#include <string_view>

#include "maxdens/tail_models.hpp"

namespace maxdens {

enum class KernelKind { gaussian, epanechnikov };

struct KernelMoments {
  double m2;  // int z^2 k(z) dz
  double r;   // int k(z)^2 dz
  double s;   // int z K(z) k(z) dz
};

/// Symmetric density kernel with its distribution function and moment constants.
class KernelSpec {
 public:
  static KernelSpec gaussian() { return KernelSpec(KernelKind::gaussian); }
  static KernelSpec epanechnikov() { return KernelSpec(KernelKind::epanechnikov); }
  /// "gaussian" or "epanechnikov" (case-insensitive); throws ParseError otherwise.
  static KernelSpec by_name(std::string_view name);
  /// Epanechnikov for the bounded class, Gaussian for the others.
  static KernelSpec for_tail(const TailClass& tail);

  KernelKind kind() const { return kind_; }
  std::string name() const;

  /// Density k(z).
  double k(double z) const;
  /// Distribution function K(z) = int_{-inf}^z k.
  double K(double z) const;
  /// Derivative k'(z).
  double dk(double z) const;
  /// Self-convolution (k * k)(u).
  double conv(double u) const;

  KernelMoments moments() const;
  double m2() const { return moments().m2; }
  double r() const { return moments().r; }
  double s() const { return moments().s; }

  /// Half-width of the support; infinity for the Gaussian.
  double support_radius() const;
  /// Radius outside which k is treated as exactly zero (and K as 0 or 1) in windowed sums.
  double cutoff() const;

  bool operator==(const KernelSpec&) const = default;

 private:
  explicit KernelSpec(KernelKind kind) : kind_(kind) {}
  KernelKind kind_;
};

KernelMoments moments(const KernelSpec& kernel);

}  // namespace maxdens
