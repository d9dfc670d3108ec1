#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "maxdens/gev.hpp"

namespace maxdens {

struct GevFitOptions {
  /// Fewer maxima than this raise FitDiverged.
  std::size_t min_blocks = 20;
  /// Convergence threshold on the gradient of the mean log-likelihood in
  /// (gamma, log a, b) of the standardized data.
  double gradient_tol = 1e-8;
  int simplex_iterations = 4000;
  int newton_iterations = 30;
};

struct GevFitResult {
  GevParams params;
  double log_likelihood = 0.0;
  double gradient_norm = 0.0;
  bool converged = false;
  /// Which starting point produced the returned optimum (0 PWM, 1 Gumbel, 2 perturbed PWM).
  int start = 0;
};

/// sum_j log g(Y_j); -inf if any point lies outside the support.
double gev_log_likelihood(std::span<const double> data, const GevParams& p);

/// Gradient of the mean log-likelihood with respect to (gamma, log a, b).
std::array<double, 3> gev_score_mean(std::span<const double> data, const GevParams& p);

/// Probability-weighted-moment estimate (Hosking's rational approximation).
GevParams gev_pwm(std::span<const double> data);

/// Maximum likelihood fit of a GEV law to block maxima. Shapes are restricted
/// to gamma > -1, where the likelihood has a proper maximum. Throws
/// FitDiverged for too few or constant data, or when no start yields a finite
/// likelihood. A result with converged == false is the best point found.
GevFitResult fit_gev(std::span<const double> data, const GevFitOptions& options = {});

}  // namespace maxdens
