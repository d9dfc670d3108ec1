#include "maxdens/pair_differences.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "maxdens/errors.hpp"

namespace maxdens {

PairDifferences::PairDifferences(std::span<const double> sample, std::size_t exact_limit,
                                 std::size_t bins)
    : n_(sample.size()) {
  if (n_ < 2) throw DomainError("pair differences need at least two observations");
  if (bins < 2) throw DomainError("histogram needs at least two bins");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  dmax_ = x.back() - x.front();
  const std::size_t pairs = n_ * (n_ - 1) / 2;

  if (pairs <= exact_limit || dmax_ == 0.0) {
    exact_ = true;
    if (dmax_ == 0.0) {
      values_.push_back(0.0);
      weights_.push_back(static_cast<double>(pairs));
      return;
    }
    values_.reserve(pairs);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) values_.push_back(x[j] - x[i]);
    weights_.assign(values_.size(), 1.0);
    return;
  }

  // Geometric bins over [dmax * 1e-14, dmax]; smaller differences (ties
  // included) are collected in a separate exact-zero cell.
  exact_ = false;
  const double lo = dmax_ * 1e-14;
  const double log_lo = std::log(lo);
  const double scale = static_cast<double>(bins) / (std::log(dmax_) - log_lo);
  constexpr long kChunks = 8;
  std::vector<std::vector<std::uint64_t>> counts(kChunks, std::vector<std::uint64_t>(bins + 1, 0));
  std::vector<std::vector<double>> sums(kChunks, std::vector<double>(bins + 1, 0.0));
  const long rows = static_cast<long>(n_);

#pragma omp parallel for schedule(static)
  for (long c = 0; c < kChunks; ++c) {
    auto& cnt = counts[static_cast<std::size_t>(c)];
    auto& sm = sums[static_cast<std::size_t>(c)];
    for (long i = c; i < rows; i += kChunks) {
      const double xi = x[static_cast<std::size_t>(i)];
      for (std::size_t j = static_cast<std::size_t>(i) + 1; j < n_; ++j) {
        const double d = x[j] - xi;
        std::size_t b = bins;  // zero cell
        if (d >= lo) {
          const auto pos = static_cast<std::size_t>((std::log(d) - log_lo) * scale);
          b = std::min(pos, bins - 1);
        }
        ++cnt[b];
        sm[b] += d;
      }
    }
  }

  for (std::size_t b = 0; b <= bins; ++b) {
    std::uint64_t cnt = 0;
    double sm = 0.0;
    for (std::size_t c = 0; c < kChunks; ++c) {
      cnt += counts[c][b];
      sm += sums[c][b];
    }
    if (cnt == 0) continue;
    values_.push_back(sm / static_cast<double>(cnt));
    weights_.push_back(static_cast<double>(cnt));
  }
}

double PairDifferences::pair_count() const {
  const double n = static_cast<double>(n_);
  return n * (n - 1.0) / 2.0;
}

}  // namespace maxdens
