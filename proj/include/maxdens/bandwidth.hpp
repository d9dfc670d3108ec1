#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "maxdens/kernels.hpp"
#include "maxdens/tail_models.hpp"

namespace maxdens {

enum class BandwidthMethod { ucv_density, cv_cdf, sj_density, al_cdf, oracle_ne1, oracle_ne2 };
std::string to_string(BandwidthMethod method);

enum class SelectionStatus {
  ok,
  no_interior_minimum,    // search ended at a bracket end; value is the bracket-best
  root_not_bracketed,     // SJ equation had no root; normal reference used
  degenerate_functional,  // plug-in functional not positive; normal reference used
};
std::string to_string(SelectionStatus status);

struct BandwidthSelection {
  explicit BandwidthSelection(BandwidthMethod m, double v = 0.0, SelectionStatus s = SelectionStatus::ok)
      : method(m), value(v), status(s) {}

  BandwidthMethod method;
  double value = 0.0;
  SelectionStatus status = SelectionStatus::ok;
  /// (h, objective) pairs visited by grid searches.
  std::vector<std::pair<double, double>> trace;

  bool flagged() const { return status != SelectionStatus::ok; }
};

/// min(sd, IQR / 1.349); falls back to sd when the IQR is zero.
double robust_scale(std::span<const double> sample);

/// UCV(h) = int f^2 - (2/n) sum f_{-i}(X_i), evaluated exactly at one h.
double ucv_objective(std::span<const double> sample, const KernelSpec& kernel, double h);

/// Unbiased cross-validation for the density. Needs n >= 4 and a sample
/// with spread; throws BandwidthError for zero spread.
BandwidthSelection ucv_density(std::span<const double> sample, const KernelSpec& kernel);

/// Cross-validation for the kernel distribution estimator, integrated over
/// the sample range on a 512-point grid. Same preconditions as UCV.
BandwidthSelection cv_cdf(std::span<const double> sample, const KernelSpec& kernel);
/// The CV_cdf criterion at one h (h = 0 gives the empirical-CDF limit).
double cv_cdf_objective(std::span<const double> sample, const KernelSpec& kernel, double h);

/// Solve-the-equation plug-in for the density (two-stage Gaussian pilot). n >= 10.
BandwidthSelection sj_density(std::span<const double> sample, const KernelSpec& kernel);

/// Plug-in for the kernel distribution estimator. n >= 10.
BandwidthSelection al_cdf(std::span<const double> sample, const KernelSpec& kernel);

struct OracleNe1 {
  double h1;
  double h2;
};

/// Asymptotically optimal (h1, h2) of the plug-in estimator at x.
OracleNe1 oracle_ne1(const TailModel& model, const KernelSpec& kernel1, const KernelSpec& kernel2, double n,
                     double m, double x);

/// Asymptotically optimal h of the block-maxima estimator at x.
double oracle_ne2(const TailModel& model, const KernelSpec& kernel, double n, double m, double x);

}  // namespace maxdens
