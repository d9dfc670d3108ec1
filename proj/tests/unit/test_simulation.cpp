#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "maxdens/errors.hpp"
#include "maxdens/simulation.hpp"

using namespace maxdens;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("scaled integrated squared error", "[simulation]") {
  const auto model = TailModel::pareto(1);
  const auto grid = make_ise_grid(model, 4);
  REQUIRE(grid.xs.size() == 512);
  CHECK_THAT(grid.xs.front(), WithinRel(smd_quantile(model, 4, 0.1), 1e-14));
  CHECK_THAT(grid.xs.back(), WithinRel(smd_quantile(model, 4, 0.9), 1e-14));
  CHECK_THAT(grid.length, WithinRel(grid.xs.back() - grid.xs.front(), 1e-14));
  CHECK(scaled_ise(grid, grid.truth) < 1e-12);
  std::vector<double> shifted(grid.truth);
  for (auto& v : shifted) v += 0.01;
  CHECK_THAT(scaled_ise(grid, shifted), WithinRel(grid.length * grid.length * 1e-4, 1e-10));
  shifted[10] = std::nan("");
  CHECK(std::isnan(scaled_ise(grid, shifted)));
  CHECK_THROWS_AS(make_ise_grid(model, 4, 1), DomainError);
}

TEST_CASE("exact parametric oracle has zero error", "[simulation]") {
  const auto model = TailModel::pareto(1);
  const auto grid = make_ise_grid(model, 16);
  std::vector<double> est(grid.xs.size());
  for (std::size_t i = 0; i < est.size(); ++i) est[i] = smd_pdf(model, 16, grid.xs[i]);
  CHECK(scaled_ise(grid, est) < 1e-12);
}

TEST_CASE("horizons", "[simulation]") {
  CHECK(horizon(256, Rational(1, 4), true) == 4);
  CHECK(horizon(4096, Rational(3, 4), true) == 512);
  CHECK(horizon(1000, Rational(1, 2), false) == 32);
  CHECK(horizon(1000, Rational(1, 2), true) == 25);
}

TEST_CASE("plans", "[simulation]") {
  KeyValues kv{{"families", "pareto(l=1);weibull(k=1)"},
               {"n", "64,128"},
               {"rho", "1/4,1/2"},
               {"estimators", "pe,ne1,ne2"},
               {"selectors", "cv,pi,oracle"},
               {"reps", "3"},
               {"seed", "9"}};
  const auto plan = plan_from_key_values(kv);
  CHECK(plan.replicates == 3);
  CHECK(plan.base_seed == 9);
  const auto cells = expand_plan(plan);
  CHECK(cells.size() == 2 * 2 * 2 * (1 + 2 * 3));
  CHECK(cells.front().selector_name() == "mle");
  CHECK(cell_seed(9, plan.families[0], 64) == cell_seed(9, plan.families[0], 64));
  CHECK(cell_seed(9, plan.families[0], 64) != cell_seed(9, plan.families[0], 128));
  CHECK(cell_seed(9, plan.families[0], 64) != cell_seed(9, plan.families[1], 64));

  kv["bogus"] = "1";
  CHECK_THROWS_AS(plan_from_key_values(kv), ParseError);
  kv.erase("bogus");
  kv["reps"] = "0";
  CHECK_THROWS_AS(plan_from_key_values(kv), DomainError);
}

TEST_CASE("running a plan", "[simulation]") {
  ExperimentPlan plan;
  plan.families = {TailModel::weibull(1)};
  plan.n_values = {256};
  plan.rhos = {Rational(1, 4)};
  plan.estimators = {EstimatorKind::pe, EstimatorKind::ne1, EstimatorKind::ne2};
  plan.selectors = {Selector::pi, Selector::oracle};
  plan.replicates = 6;
  plan.base_seed = 3;
  const auto a = run_plan(plan);
  REQUIRE(a.cells.size() == 5);
  for (const auto& c : a.cells) {
    INFO(to_string(c.spec.estimator) << "/" << c.spec.selector_name());
    CHECK(c.error.empty());
    CHECK(c.replicates == 6);
    CHECK(c.failures == 0);
    CHECK(c.mean > 0.0);
    CHECK(std::isfinite(c.sd));
  }
  std::ostringstream csv1, csv2;
  write_cells_csv(csv1, a.cells);
  write_cells_csv(csv2, run_plan(plan).cells);
  CHECK(csv1.str() == csv2.str());
  CHECK(csv1.str().rfind("family,params,n,rho,m,estimator,selector,mean_mise,sd,replicates,failures,seed\n", 0) == 0);

  // a cell run alone sees the same samples as inside the plan
  const auto alone = run_cell(expand_plan(plan)[2], plan);
  CHECK(alone.mean == a.cells[2].mean);

  std::ostringstream man;
  write_manifest(man, a.manifest);
  CHECK(man.str().find("seed = 3") != std::string::npos);

  ExperimentPlan tiny = plan;
  tiny.n_values = {8};
  tiny.estimators = {EstimatorKind::ne2};
  tiny.selectors = {Selector::cv};
  tiny.rhos = {Rational(3, 4)};
  const auto bad = run_plan(tiny);
  CHECK_FALSE(bad.cells[0].error.empty());
  CHECK_THROWS_AS(run_cell(expand_plan(tiny)[0], tiny), AllReplicatesFailed);
}
