#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "maxdens/rates.hpp"
#include "maxdens/tail_models.hpp"

namespace maxdens {

/// One row of the reference rate tables with its printed entries, indexed
/// [rho][estimator] with rho in {1/4, 1/2, 3/4} and estimators (PE, NE1, NE2).
struct ReferenceRateRow {
  RateRow row;
  std::array<std::array<RateExponent, 3>, 3> raw;
  std::array<std::array<RateExponent, 3>, 3> normalized;
};

const std::array<Rational, 3>& table_rhos();
std::span<const ReferenceRateRow> reference_rate_rows();

/// Distribution with the row's family parameters.
TailModel row_model(const RateRow& row);

/// Rate row of an arbitrary model, with its tail exponents read as rationals.
RateRow rate_row(const TailModel& model);

struct RateDiff {
  const ReferenceRateRow* row;
  Rational rho;
  EstimatorKind estimator;
  bool normalized;
  RateExponent computed;
  RateExponent printed;
};

/// Cells where computed and printed exponents differ.
std::vector<RateDiff> diff_against_reference(bool include_normalized);

/// Rows whose printed tail columns disagree with the tail class derived from
/// the family parameters (one line per disagreement).
std::vector<std::string> tail_parameter_discrepancies();

}  // namespace maxdens
