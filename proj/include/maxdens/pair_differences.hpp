#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "maxdens/parallel.hpp"

namespace maxdens {

/// The n(n-1)/2 absolute differences |X_i - X_j|, i < j, of a sample, held
/// either exactly or as a weighted histogram on a geometric grid.
/// Objectives of the form sum_{i<j} g(|X_i - X_j|) then cost one pass over
/// at most `bins` entries instead of n^2 / 2.
class PairDifferences {
 public:
  static constexpr std::size_t kDefaultExactLimit = 65536;
  static constexpr std::size_t kDefaultBins = 65536;

  explicit PairDifferences(std::span<const double> sample,
                           std::size_t exact_limit = kDefaultExactLimit,
                           std::size_t bins = kDefaultBins);

  std::size_t sample_size() const { return n_; }
  double pair_count() const;
  bool exact() const { return exact_; }
  double max_difference() const { return dmax_; }

  /// Representative differences and their pair counts. Histogram entries
  /// carry the mean difference of the pairs in their bin.
  std::span<const double> values() const { return values_; }
  std::span<const double> weights() const { return weights_; }

  /// sum_{i<j} g(|X_i - X_j|), independent of the thread count.
  template <class G>
  double sum(G&& g) const {
    return chunked_sum(values_.size(), [&](std::size_t i) { return weights_[i] * g(values_[i]); });
  }

 private:
  std::size_t n_ = 0;
  bool exact_ = true;
  double dmax_ = 0.0;
  std::vector<double> values_;
  std::vector<double> weights_;
};

}  // namespace maxdens
