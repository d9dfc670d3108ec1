#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "maxdens/config.hpp"
#include "maxdens/estimators.hpp"
#include "maxdens/rates.hpp"
#include "maxdens/tail_models.hpp"

namespace maxdens {

struct QuantileRange {
  double lo = 0.1;
  double hi = 0.9;
};

/// Uniform grid over [Q_m(lo), Q_m(hi)] with the true smd at each node.
struct IseGrid {
  std::vector<double> xs;
  std::vector<double> truth;
  double length = 0.0;  // L_m = Q_m(hi) - Q_m(lo)
  double step = 0.0;
};

IseGrid make_ise_grid(const TailModel& model, double m, std::size_t grid_points = 512, QuantileRange q = {});

/// L_m times the trapezoid integral of (estimate - truth)^2; NaN if any
/// estimate is not finite.
double scaled_ise(const IseGrid& grid, std::span<const double> estimate);
double scaled_ise(const EstimatorFit& fit, const TailModel& model, double m, std::size_t grid_points = 512,
                  QuantileRange q = {});

struct ExperimentPlan {
  std::vector<TailModel> families;
  std::vector<std::size_t> n_values;
  std::vector<Rational> rhos;
  std::vector<EstimatorKind> estimators;
  std::vector<Selector> selectors;
  std::size_t replicates = 200;
  std::uint64_t base_seed = 1;
  std::size_t grid_points = 512;
  QuantileRange q{};
  std::size_t min_blocks = 4;
  double delta = 1.0;
  bool rescale_to_m = false;

  /// Throws DomainError on an invalid plan.
  void validate() const;
};

/// Reads families (';'-separated), n, rho, estimators, selectors, reps, seed,
/// grid_points, q_lo, q_hi, min_blocks, delta, rescale_to_m.
ExperimentPlan plan_from_key_values(const KeyValues& kv);

/// One cell of the experiment. PE cells carry the selector name "mle".
struct CellSpec {
  TailModel family;
  std::size_t n;
  Rational rho;
  std::size_t m;
  std::size_t m_rounded;  // round(n^rho) before any divisor adjustment
  EstimatorKind estimator;
  Selector selector;
  std::string selector_name() const;
};

struct MiseCell {
  explicit MiseCell(CellSpec s) : spec(std::move(s)) {}

  CellSpec spec;
  double mean = 0.0;
  double sd = 0.0;
  std::size_t replicates = 0;
  std::size_t failures = 0;
  std::size_t flagged = 0;  // successful replicates with a flagged fit or selector
  std::uint64_t seed = 0;
  std::string error;        // set when every replicate failed
};

/// round(n^rho), moved down to a divisor of n when `divisible` is set.
std::size_t horizon(std::size_t n, const Rational& rho, bool divisible);

/// Cells of the plan in output order.
std::vector<CellSpec> expand_plan(const ExperimentPlan& plan);

/// Seed of the sample stream shared by every cell with this family and n.
std::uint64_t cell_seed(std::uint64_t base_seed, const TailModel& family, std::size_t n);

/// Runs one cell alone. Throws AllReplicatesFailed if no replicate succeeds.
MiseCell run_cell(const CellSpec& cell, const ExperimentPlan& settings);

struct PlanResult {
  std::vector<MiseCell> cells;
  KeyValues manifest;
};

/// Runs every cell; cells that fail entirely are reported, not thrown.
/// Results do not depend on the number of worker threads.
PlanResult run_plan(const ExperimentPlan& plan);

void write_cells_csv(std::ostream& out, std::span<const MiseCell> cells);
void write_manifest(std::ostream& out, const KeyValues& manifest);

}  // namespace maxdens
