#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "maxdens/bandwidth.hpp"
#include "maxdens/gev.hpp"
#include "maxdens/gev_fit.hpp"
#include "maxdens/kernels.hpp"
#include "maxdens/rates.hpp"
#include "maxdens/tail_models.hpp"

namespace maxdens {

/// Maxima of consecutive blocks of a sample.
struct BlockMaxima {
  std::vector<double> blocks;
  std::size_t block_size = 0;
  std::size_t n_blocks() const { return blocks.size(); }
};

/// Throws NonDivisibleBlock unless k divides the sample length.
BlockMaxima block_maxima(std::span<const double> sample, std::size_t k);

/// GEV MLE on the block maxima; see fit_gev.
GevFitResult fit_gev_mle(const BlockMaxima& blocks, const GevFitOptions& options = {});

/// Moves GEV parameters fitted at block size k to horizon m by max-stability:
/// a t^gamma and b + a (t^gamma - 1) / gamma with t = m / k.
GevParams rescale_gev(const GevParams& fit, double m, double k);

/// Parametric estimate at x: the fitted GEV density, optionally rescaled from k to m.
double pe_density(const GevParams& fit, double m, double k, double x, bool rescale_to_m = false);

/// m f(x; h1) F(x; h2)^{m-1} with F clamped to [0, 1].
double ne1_density(std::span<const double> sample, double h1, double h2, const KernelSpec& kernel1,
                   const KernelSpec& kernel2, double m, double x);

/// Kernel density estimate over the block maxima.
double ne2_density(const BlockMaxima& blocks, double h, const KernelSpec& kernel, double x);

/// A fitted estimator of the sample-maximum density, evaluable anywhere.
class EstimatorFit {
 public:
  static EstimatorFit pe(const GevFitResult& fit, std::size_t m, std::size_t k, bool rescale_to_m);
  static EstimatorFit ne1(std::vector<double> sample, double h1, double h2, const KernelSpec& kernel1,
                          const KernelSpec& kernel2, std::size_t m);
  static EstimatorFit ne2(const BlockMaxima& blocks, double h, const KernelSpec& kernel);

  EstimatorKind kind() const { return kind_; }
  std::size_t m() const { return m_; }
  std::size_t k() const { return k_; }

  double operator()(double x) const;
  std::vector<double> evaluate(std::span<const double> xs) const;

  /// Parameters used for evaluation (after any rescaling). PE only.
  const GevParams& gev() const { return gev_; }
  const GevFitResult& gev_fit() const { return fit_; }
  double h1() const { return h1_; }
  double h2() const { return h2_; }
  double h() const { return h1_; }

  /// key=value description of the fit for output headers.
  std::vector<std::pair<std::string, std::string>> describe() const;

 private:
  EstimatorFit(EstimatorKind kind, std::size_t m) : kind_(kind), m_(m), k_(m) {}

  EstimatorKind kind_;
  std::size_t m_;
  std::size_t k_;
  GevFitResult fit_{};
  GevParams gev_{};
  bool rescaled_ = false;
  std::vector<double> sorted_;  // sample (NE1) or block maxima (NE2), ascending
  double h1_ = 0.0;
  double h2_ = 0.0;
  KernelSpec kernel1_ = KernelSpec::gaussian();
  KernelSpec kernel2_ = KernelSpec::gaussian();
};

enum class Selector { cv, pi, oracle };
std::string to_string(Selector selector);
Selector parse_selector(std::string_view s);
EstimatorKind parse_estimator(std::string_view s);

/// Everything needed to fit one estimator to one sample.
struct FitRequest {
  EstimatorKind kind = EstimatorKind::ne1;
  Selector selector = Selector::cv;  // ignored for PE
  std::size_t m = 1;
  std::size_t k = 0;  // PE block size; 0 means k = m
  std::optional<KernelSpec> kernel;  // default: by tail class of the model, else Gaussian
  bool rescale_to_m = false;
  const TailModel* model = nullptr;  // required by the oracle selector
  double delta = 1.0;                // oracle bandwidths are evaluated at x_n with M_n = delta
  GevFitOptions gev_options{};
};

/// Selected bandwidths alongside the fitted estimator.
struct FittedEstimator {
  EstimatorFit fit;
  std::vector<BandwidthSelection> selections;
};

/// Fits the requested estimator, running the bandwidth selectors it needs.
/// Throws NonDivisibleBlock, InsufficientBlocks, FitDiverged or BandwidthError.
FittedEstimator fit_estimator(std::span<const double> sample, const FitRequest& request);

}  // namespace maxdens
