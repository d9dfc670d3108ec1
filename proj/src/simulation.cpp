#include "maxdens/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>

#include "maxdens/asymptotics.hpp"
#include "maxdens/bandwidth.hpp"
#include "maxdens/errors.hpp"
#include "maxdens/parallel.hpp"
#include "maxdens/rng.hpp"

namespace maxdens {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v, const char* spec = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ParseError("expected a boolean, got '" + s + "'");
}

std::size_t parse_count(const std::string& s) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw ParseError("expected a count, got '" + s + "'");
  }
  if (pos != s.size() || v < 0) throw ParseError("expected a count, got '" + s + "'");
  return static_cast<std::size_t>(v);
}

double parse_real(const std::string& s) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ParseError("expected a number, got '" + s + "'");
  }
  if (pos != s.size()) throw ParseError("expected a number, got '" + s + "'");
  return v;
}

struct ReplicateOutcome {
  double ise = kNaN;
  bool flagged = false;
};

// Bandwidths of NE1 depend only on the sample, so they are shared by every
// horizon of a replicate.
struct Ne1Bandwidths {
  double h1;
  double h2;
  bool flagged;
};

class ReplicateRunner {
 public:
  ReplicateRunner(const std::vector<CellSpec>& cells, const ExperimentPlan& settings)
      : cells_(cells), settings_(settings) {
    for (const auto& c : cells) grids_.push_back(make_ise_grid(c.family, static_cast<double>(c.m),
                                                               settings.grid_points, settings.q));
  }

  std::vector<ReplicateOutcome> run(std::span<const double> sample) const {
    std::map<Selector, Ne1Bandwidths> ne1_cache;
    std::vector<ReplicateOutcome> out(cells_.size());
    for (std::size_t c = 0; c < cells_.size(); ++c) {
      try {
        out[c] = run_one(c, sample, ne1_cache);
      } catch (const Error&) {
        out[c] = {};
      }
    }
    return out;
  }

 private:
  ReplicateOutcome run_one(std::size_t c, std::span<const double> sample,
                           std::map<Selector, Ne1Bandwidths>& ne1_cache) const {
    const CellSpec& cell = cells_[c];
    const KernelSpec kernel = KernelSpec::for_tail(cell.family.tail());
    const double n = static_cast<double>(sample.size());
    const double m = static_cast<double>(cell.m);
    ReplicateOutcome result;
    std::vector<double> est;

    switch (cell.estimator) {
      case EstimatorKind::pe: {
        GevFitOptions opts;
        opts.min_blocks = settings_.min_blocks;
        const GevFitResult fit = fit_gev_mle(block_maxima(sample, cell.m), opts);
        result.flagged = !fit.converged;
        est = EstimatorFit::pe(fit, cell.m, cell.m, settings_.rescale_to_m).evaluate(grids_[c].xs);
        break;
      }
      case EstimatorKind::ne1: {
        Ne1Bandwidths bw{};
        if (cell.selector == Selector::oracle) {
          const double x = x_rule(cell.family.tail(), m, settings_.delta);
          const auto o = oracle_ne1(cell.family, kernel, kernel, n, m, x);
          bw = {o.h1, o.h2, false};
        } else if (auto it = ne1_cache.find(cell.selector); it != ne1_cache.end()) {
          bw = it->second;
        } else {
          const bool cv = cell.selector == Selector::cv;
          const BandwidthSelection s1 = cv ? ucv_density(sample, kernel) : sj_density(sample, kernel);
          const BandwidthSelection s2 = cv ? cv_cdf(sample, kernel) : al_cdf(sample, kernel);
          bw = {s1.value, s2.value, s1.flagged() || s2.flagged()};
          ne1_cache.emplace(cell.selector, bw);
        }
        result.flagged = bw.flagged;
        est = EstimatorFit::ne1(std::vector<double>(sample.begin(), sample.end()), bw.h1, bw.h2, kernel, kernel,
                                cell.m)
                  .evaluate(grids_[c].xs);
        break;
      }
      case EstimatorKind::ne2: {
        const BlockMaxima bm = block_maxima(sample, cell.m);
        if (bm.n_blocks() < 2) throw InsufficientBlocks("NE2 needs at least two block maxima");
        double h = 0.0;
        if (cell.selector == Selector::oracle) {
          h = oracle_ne2(cell.family, kernel, n, m, x_rule(cell.family.tail(), m, settings_.delta));
        } else {
          const BandwidthSelection s =
              cell.selector == Selector::cv ? ucv_density(bm.blocks, kernel) : sj_density(bm.blocks, kernel);
          h = s.value;
          result.flagged = s.flagged();
        }
        est = EstimatorFit::ne2(bm, h, kernel).evaluate(grids_[c].xs);
        break;
      }
    }
    result.ise = scaled_ise(grids_[c], est);
    return result;
  }

  const std::vector<CellSpec>& cells_;
  const ExperimentPlan& settings_;
  std::vector<IseGrid> grids_;
};

// Runs all cells sharing one (family, n): each replicate draws one sample and
// feeds it to every cell. Replicates are spread over threads; results are
// stored per replicate and reduced in replicate order afterwards.
std::vector<MiseCell> run_group(const std::vector<CellSpec>& cells, const ExperimentPlan& settings) {
  const CellSpec& first = cells.front();
  const std::uint64_t seed = cell_seed(settings.base_seed, first.family, first.n);
  const ReplicateRunner runner(cells, settings);
  const long reps = static_cast<long>(settings.replicates);
  std::vector<std::vector<ReplicateOutcome>> outcomes(settings.replicates);

  configure_threads();
#pragma omp parallel for schedule(dynamic, 1)
  for (long r = 0; r < reps; ++r) {
    const auto sample = first.family.sample(first.n, derive_seed(seed, static_cast<std::uint64_t>(r)));
    outcomes[static_cast<std::size_t>(r)] = runner.run(sample);
  }

  std::vector<MiseCell> result;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    MiseCell cell(cells[c]);
    cell.replicates = settings.replicates;
    cell.seed = seed;
    std::vector<double> ok;
    for (const auto& rep : outcomes) {
      const auto& o = rep[c];
      if (std::isfinite(o.ise)) {
        ok.push_back(o.ise);
        if (o.flagged) ++cell.flagged;
      } else {
        ++cell.failures;
      }
    }
    if (ok.empty()) {
      cell.mean = kNaN;
      cell.sd = kNaN;
      cell.error = "all replicates failed";
    } else {
      // two-pass mean and sample sd
      double sum = 0.0;
      for (double v : ok) sum += v;
      cell.mean = sum / static_cast<double>(ok.size());
      double ss = 0.0;
      for (double v : ok) ss += (v - cell.mean) * (v - cell.mean);
      cell.sd = ok.size() > 1 ? std::sqrt(ss / static_cast<double>(ok.size() - 1)) : 0.0;
    }
    result.push_back(std::move(cell));
  }
  return result;
}

}  // namespace

IseGrid make_ise_grid(const TailModel& model, double m, std::size_t grid_points, QuantileRange q) {
  if (grid_points < 2) throw DomainError("ISE grid needs at least two points");
  if (!(q.lo > 0.0 && q.lo < q.hi && q.hi < 1.0)) throw DomainError("quantile range must satisfy 0 < lo < hi < 1");
  const double a = smd_quantile(model, m, q.lo);
  const double b = smd_quantile(model, m, q.hi);
  IseGrid g;
  g.length = b - a;
  g.step = g.length / static_cast<double>(grid_points - 1);
  g.xs.resize(grid_points);
  g.truth.resize(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i) {
    g.xs[i] = i + 1 == grid_points ? b : a + g.step * static_cast<double>(i);
    g.truth[i] = smd_pdf(model, m, g.xs[i]);
  }
  return g;
}

double scaled_ise(const IseGrid& grid, std::span<const double> estimate) {
  if (estimate.size() != grid.xs.size()) throw DomainError("estimate does not match the ISE grid");
  double s = 0.0;
  const std::size_t last = estimate.size() - 1;
  for (std::size_t i = 0; i <= last; ++i) {
    if (!std::isfinite(estimate[i])) return kNaN;
    const double d = estimate[i] - grid.truth[i];
    s += (i == 0 || i == last ? 0.5 : 1.0) * d * d;
  }
  return grid.length * s * grid.step;
}

double scaled_ise(const EstimatorFit& fit, const TailModel& model, double m, std::size_t grid_points,
                  QuantileRange q) {
  const IseGrid grid = make_ise_grid(model, m, grid_points, q);
  return scaled_ise(grid, fit.evaluate(grid.xs));
}

void ExperimentPlan::validate() const {
  if (families.empty()) throw DomainError("plan needs at least one family");
  if (n_values.empty()) throw DomainError("plan needs at least one n");
  if (rhos.empty()) throw DomainError("plan needs at least one rho");
  if (estimators.empty()) throw DomainError("plan needs at least one estimator");
  if (replicates < 1) throw DomainError("plan needs replicates >= 1");
  if (grid_points < 64) throw DomainError("plan needs grid_points >= 64");
  if (!(q.lo > 0.0 && q.lo < q.hi && q.hi < 1.0)) throw DomainError("plan needs 0 < q_lo < q_hi < 1");
  if (!(delta > 0.0)) throw DomainError("plan needs delta > 0");
  for (auto n : n_values)
    if (n < 2) throw DomainError("plan needs n >= 2");
  for (const auto& r : rhos)
    if (!(r > 0 && r < 1)) throw DomainError("plan needs 0 < rho < 1");
  const bool needs_selector = std::any_of(estimators.begin(), estimators.end(),
                                          [](EstimatorKind k) { return k != EstimatorKind::pe; });
  if (needs_selector && selectors.empty()) throw DomainError("plan needs a selector for NE1/NE2");
}

ExperimentPlan plan_from_key_values(const KeyValues& kv) {
  static const char* known[] = {"families", "family", "n", "rho", "estimators", "estimator", "selectors",
                                "bandwidth", "reps", "seed", "grid_points", "q_lo", "q_hi", "min_blocks",
                                "delta", "rescale_to_m"};
  for (const auto& [key, value] : kv)
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) == std::end(known))
      throw ParseError("unknown plan key '" + key + "'");
  auto get = [&](const char* a, const char* b = nullptr) -> const std::string* {
    if (auto it = kv.find(a); it != kv.end()) return &it->second;
    if (b)
      if (auto it = kv.find(b); it != kv.end()) return &it->second;
    return nullptr;
  };
  ExperimentPlan p;
  if (auto v = get("families", "family"))
    for (const auto& f : split_list(*v, ';')) p.families.push_back(TailModel::parse(f));
  if (auto v = get("n"))
    for (const auto& s : split_list(*v, ',')) p.n_values.push_back(parse_count(s));
  if (auto v = get("rho"))
    for (const auto& s : split_list(*v, ',')) p.rhos.push_back(parse_rational(s));
  if (auto v = get("estimators", "estimator"))
    for (const auto& s : split_list(*v, ',')) p.estimators.push_back(parse_estimator(s));
  if (auto v = get("selectors", "bandwidth"))
    for (const auto& s : split_list(*v, ',')) p.selectors.push_back(parse_selector(s));
  if (auto v = get("reps")) p.replicates = parse_count(*v);
  if (auto v = get("seed")) p.base_seed = parse_count(*v);
  if (auto v = get("grid_points")) p.grid_points = parse_count(*v);
  if (auto v = get("q_lo")) p.q.lo = parse_real(*v);
  if (auto v = get("q_hi")) p.q.hi = parse_real(*v);
  if (auto v = get("min_blocks")) p.min_blocks = parse_count(*v);
  if (auto v = get("delta")) p.delta = parse_real(*v);
  if (auto v = get("rescale_to_m")) p.rescale_to_m = parse_bool(*v);
  if (p.replicates == 0) throw DomainError("reps must be positive");
  if (p.grid_points < 2) throw DomainError("grid_points must be at least 2");
  for (auto n : p.n_values)
    if (n < 2) throw DomainError("sample sizes must be at least 2");
  if (!(p.q.lo > 0 && p.q.lo < p.q.hi && p.q.hi < 1)) throw DomainError("need 0 < q_lo < q_hi < 1");
  return p;
}

std::string CellSpec::selector_name() const {
  return estimator == EstimatorKind::pe ? "mle" : to_string(selector);
}

std::size_t horizon(std::size_t n, const Rational& rho, bool divisible) {
  const double x = std::pow(static_cast<double>(n),
                            static_cast<double>(rho.numerator()) / static_cast<double>(rho.denominator()));
  // guard exact powers such as 256^(1/4) against rounding just below an integer
  auto m = static_cast<std::size_t>(std::llround(x + 1e-9));
  m = std::clamp<std::size_t>(m, 1, n);
  if (divisible)
    while (n % m != 0) --m;
  return m;
}

std::vector<CellSpec> expand_plan(const ExperimentPlan& plan) {
  plan.validate();
  std::vector<CellSpec> cells;
  for (const auto& fam : plan.families)
    for (auto n : plan.n_values)
      for (const auto& rho : plan.rhos)
        for (auto est : plan.estimators) {
          const bool blocks = est != EstimatorKind::ne1;
          const std::size_t m = horizon(n, rho, blocks);
          const std::size_t m0 = horizon(n, rho, false);
          if (est == EstimatorKind::pe) {
            cells.push_back({fam, n, rho, m, m0, est, Selector::cv});
            continue;
          }
          for (auto sel : plan.selectors) cells.push_back({fam, n, rho, m, m0, est, sel});
        }
  return cells;
}

std::uint64_t cell_seed(std::uint64_t base_seed, const TailModel& family, std::size_t n) {
  return derive_seed(derive_seed(base_seed, stable_hash(family.spec())), n);
}

MiseCell run_cell(const CellSpec& cell, const ExperimentPlan& settings) {
  auto result = run_group({cell}, settings).front();
  if (!result.error.empty())
    throw AllReplicatesFailed(cell.family.spec() + " n=" + std::to_string(cell.n) + " " +
                              to_string(cell.estimator) + "/" + cell.selector_name() + ": every replicate failed");
  return result;
}

PlanResult run_plan(const ExperimentPlan& plan) {
  const auto start = std::chrono::steady_clock::now();
  const auto cells = expand_plan(plan);

  // group cells by (family, n), keeping first-appearance order
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::pair<std::string, std::size_t>> keys;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::pair<std::string, std::size_t> key{cells[i].family.spec(), cells[i].n};
    auto it = std::find(keys.begin(), keys.end(), key);
    if (it == keys.end()) {
      keys.push_back(key);
      groups.emplace_back();
      it = keys.end() - 1;
    }
    groups[static_cast<std::size_t>(it - keys.begin())].push_back(i);
  }

  PlanResult out;
  out.cells.resize(cells.size(), MiseCell(cells.front()));
  for (const auto& g : groups) {
    std::vector<CellSpec> specs;
    for (auto i : g) specs.push_back(cells[i]);
    const auto res = run_group(specs, plan);
    for (std::size_t j = 0; j < g.size(); ++j) out.cells[g[j]] = res[j];
  }

  auto& mf = out.manifest;
  std::string fams, ns, rhos, ests, sels;
  for (const auto& f : plan.families) fams += (fams.empty() ? "" : "; ") + f.spec();
  for (auto n : plan.n_values) ns += (ns.empty() ? "" : ",") + std::to_string(n);
  for (const auto& r : plan.rhos) rhos += (rhos.empty() ? "" : ",") + to_string(r);
  for (auto e : plan.estimators) ests += (ests.empty() ? "" : ",") + to_string(e);
  for (auto s : plan.selectors) sels += (sels.empty() ? "" : ",") + to_string(s);
  mf["families"] = fams;
  mf["n"] = ns;
  mf["rho"] = rhos;
  mf["estimators"] = ests;
  mf["selectors"] = sels;
  mf["reps"] = std::to_string(plan.replicates);
  mf["seed"] = std::to_string(plan.base_seed);
  mf["grid_points"] = std::to_string(plan.grid_points);
  mf["q_lo"] = fmt(plan.q.lo);
  mf["q_hi"] = fmt(plan.q.hi);
  mf["min_blocks"] = std::to_string(plan.min_blocks);
  mf["delta"] = fmt(plan.delta);
  mf["rescale_to_m"] = plan.rescale_to_m ? "true" : "false";
  mf["cells"] = std::to_string(out.cells.size());
  mf["version"] = "maxdens 0.1.0";
  mf["threads"] = std::to_string(worker_count());
  for (std::size_t i = 0; i < out.cells.size(); ++i) {
    const auto& c = out.cells[i];
    const std::string p = "cell." + std::to_string(i) + ".";
    mf[p + "key"] = c.spec.family.spec() + " n=" + std::to_string(c.spec.n) + " rho=" + to_string(c.spec.rho) +
                    " " + to_string(c.spec.estimator) + "/" + c.spec.selector_name();
    mf[p + "m"] = std::to_string(c.spec.m) +
                  (c.spec.m != c.spec.m_rounded ? " (round(n^rho)=" + std::to_string(c.spec.m_rounded) +
                                                      " moved down to a divisor of n)"
                                                : "");
    mf[p + "seed"] = std::to_string(c.seed);
    mf[p + "failures"] = std::to_string(c.failures);
    mf[p + "flagged"] = std::to_string(c.flagged);
    if (!c.error.empty()) mf[p + "error"] = c.error;
  }
  mf["wall_seconds"] = fmt(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), "%.3f");
  return out;
}

void write_cells_csv(std::ostream& out, std::span<const MiseCell> cells) {
  out << "family,params,n,rho,m,estimator,selector,mean_mise,sd,replicates,failures,seed\n";
  for (const auto& c : cells) {
    out << c.spec.family.name() << ",\"" << c.spec.family.params() << "\"," << c.spec.n << ','
        << to_string(c.spec.rho) << ',' << c.spec.m << ',' << to_string(c.spec.estimator) << ','
        << c.spec.selector_name() << ',' << (c.error.empty() ? fmt(c.mean, "%.6e") : "nan") << ','
        << (c.error.empty() ? fmt(c.sd, "%.6e") : "nan") << ',' << c.replicates << ',' << c.failures << ','
        << c.seed << '\n';
  }
}

void write_manifest(std::ostream& out, const KeyValues& manifest) {
  for (const auto& [k, v] : manifest) out << k << " = " << v << '\n';
}

}  // namespace maxdens
