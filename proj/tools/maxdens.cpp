#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "maxdens/config.hpp"
#include "maxdens/errors.hpp"
#include "maxdens/estimators.hpp"
#include "maxdens/rate_tables.hpp"
#include "maxdens/rates.hpp"
#include "maxdens/simulation.hpp"
#include "maxdens/tail_models.hpp"
#include "svg.hpp"

using namespace maxdens;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string error_kind(const Error& e) {
  if (dynamic_cast<const FitDiverged*>(&e)) return "FitDiverged";
  if (dynamic_cast<const NonDivisibleBlock*>(&e)) return "NonDivisibleBlock";
  if (dynamic_cast<const InsufficientBlocks*>(&e)) return "InsufficientBlocks";
  if (dynamic_cast<const FisherSingular*>(&e)) return "FisherSingular";
  if (dynamic_cast<const BandwidthError*>(&e)) return "BandwidthError";
  if (dynamic_cast<const AllReplicatesFailed*>(&e)) return "AllReplicatesFailed";
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
  return "Error";
}

// Writes to the named file, or to stdout for "-".
void emit(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error("failed writing '" + path + "'");
}

std::vector<double> read_numbers(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::vector<double> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    try {
      std::size_t used = 0;
      const double v = std::stod(t, &used);
      if (used != t.size() || !std::isfinite(v)) throw std::invalid_argument(t);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": not a number: '" + t + "'");
    }
  }
  if (out.empty()) throw ParseError("'" + path + "' contains no data");
  return out;
}

// Inserts `--key=value` for every entry of a --config file right after the
// subcommand, so that flags given on the command line (parsed later) win.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::optional<std::string> path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (!path || args.size() < 2) return args;
  std::vector<std::string> injected;
  for (const auto& [key, value] : read_key_values_file(*path)) {
    if (key == "config") continue;
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    injected.push_back("--" + flag + "=" + value);
  }
  args.insert(args.begin() + 2, injected.begin(), injected.end());
  return args;
}

struct Curve {
  std::vector<double> xs;
  std::vector<double> truth;  // empty without a model
};

// Uniform grid over [Q_m(0.1), Q_m(0.9)]: exact quantiles of the maximum when
// the model is known, otherwise sample quantiles at q^{1/m}.
Curve estimate_grid(const TailModel* model, std::vector<double> sample, double m, std::size_t points) {
  Curve c;
  if (model) {
    auto grid = make_ise_grid(*model, m, points);
    c.xs = std::move(grid.xs);
    c.truth = std::move(grid.truth);
    return c;
  }
  std::sort(sample.begin(), sample.end());
  auto q = [&](double p) {
    const double h = (static_cast<double>(sample.size()) - 1.0) * std::pow(p, 1.0 / m);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sample.size() - 1);
    return sample[lo] + (h - static_cast<double>(lo)) * (sample[hi] - sample[lo]);
  };
  const double a = q(0.1), b = q(0.9);
  for (std::size_t i = 0; i < points; ++i)
    c.xs.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
  return c;
}

struct EstimateArgs {
  std::string family, data, estimator = "ne1", bandwidth = "cv", kernel = "auto", out = "-", format = "csv", rho;
  std::size_t n = 4096, m = 0;
  std::uint64_t seed = 1;
  bool rescale = false;
};

int cmd_estimate(const EstimateArgs& a) {
  if (a.family.empty() == a.data.empty()) throw DomainError("estimate needs exactly one of --family or --data");
  std::optional<TailModel> model;
  std::vector<double> sample;
  if (!a.family.empty()) {
    model = TailModel::parse(a.family);
    sample = model->sample(a.n, a.seed);
  } else {
    sample = read_numbers(a.data);
  }
  FitRequest req;
  req.kind = parse_estimator(a.estimator);
  req.selector = parse_selector(a.bandwidth);
  if (a.m > 0) {
    req.m = a.m;
  } else if (!a.rho.empty()) {
    req.m = horizon(sample.size(), parse_rational(a.rho), req.kind != EstimatorKind::ne1);
  } else {
    throw DomainError("estimate needs --m or --rho");
  }
  if (a.kernel != "auto") req.kernel = KernelSpec::by_name(a.kernel);
  req.rescale_to_m = a.rescale;
  req.model = model ? &*model : nullptr;
  const FittedEstimator fitted = fit_estimator(sample, req);

  const Curve grid = estimate_grid(req.model, sample, static_cast<double>(req.m), 512);
  const std::vector<double> est = fitted.fit.evaluate(grid.xs);

  if (a.format == "svg") {
    plot::Figure fig;
    fig.title = (model ? model->spec() : a.data) + "  m=" + std::to_string(req.m);
    fig.x_label = "x";
    fig.y_label = "density of the maximum";
    fig.series.push_back({to_string(req.kind), grid.xs, est, false});
    if (!grid.truth.empty()) fig.series.push_back({"truth", grid.xs, grid.truth, true});
    emit(a.out, plot::render_svg(fig));
    return 0;
  }

  std::ostringstream o;
  o << "# source = " << (model ? model->spec() : a.data) << '\n';
  o << "# n = " << sample.size() << '\n';
  if (model) o << "# seed = " << a.seed << '\n';
  if (req.kind != EstimatorKind::pe) o << "# selector = " << to_string(req.selector) << '\n';
  for (const auto& [k, v] : fitted.fit.describe()) o << "# " << k << " = " << v << '\n';
  for (std::size_t i = 0; i < fitted.selections.size(); ++i) {
    const auto& s = fitted.selections[i];
    o << "# selection." << i << " = " << to_string(s.method) << " h=" << fmt(s.value)
      << " status=" << to_string(s.status) << '\n';
  }
  o << (grid.truth.empty() ? "x,estimate\n" : "x,estimate,truth\n");
  char buf[128];
  for (std::size_t i = 0; i < grid.xs.size(); ++i) {
    if (grid.truth.empty())
      std::snprintf(buf, sizeof buf, "%.10g,%.10g\n", grid.xs[i], est[i]);
    else
      std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g\n", grid.xs[i], est[i], grid.truth[i]);
    o << buf;
  }
  emit(a.out, o.str());
  return 0;
}

struct RatesArgs {
  std::string family, rho = "1/4,1/2,3/4", out = "-", format = "csv";
  bool diff_paper = false;
};

int cmd_rates(const RatesArgs& a) {
  if (a.format != "csv") throw DomainError("rates writes csv only");
  std::vector<RateRow> rows;
  if (a.family.empty()) {
    for (const auto& r : reference_rate_rows()) rows.push_back(r.row);
  } else {
    for (const auto& f : split_list(a.family, ';')) rows.push_back(rate_row(TailModel::parse(f)));
  }
  std::vector<Rational> rhos;
  for (const auto& s : split_list(a.rho, ',')) rhos.push_back(parse_rational(s));

  std::ostringstream o;
  o << "family,params,gamma,rho,pe,ne1,ne2,pe_normalized,ne1_normalized,ne2_normalized\n";
  for (const auto& row : rows) {
    const std::string family = TailModel::parse(row_model(row).spec()).name();
    for (const auto& rho : rhos) {
      const auto raw = rate_exponents(row, rho);
      const auto norm = normalized_rate_exponents(row, rho);
      o << family << ",\"" << row.label << "\"," << to_string(row.gamma) << ',' << to_string(rho) << ','
        << raw.pe.str() << ',' << raw.ne1.str() << ',' << raw.ne2.str() << ',' << norm.pe.str() << ','
        << norm.ne1.str() << ',' << norm.ne2.str() << '\n';
    }
  }
  emit(a.out, o.str());

  if (a.diff_paper) {
    std::ostringstream d;
    const auto diffs = diff_against_reference(true);
    d << "# differences from the printed tables: " << diffs.size() << '\n';
    for (const auto& x : diffs)
      d << "diff " << row_model(x.row->row).spec() << " rho=" << to_string(x.rho) << ' ' << to_string(x.estimator)
        << (x.normalized ? " normalized" : " raw") << " computed=" << x.computed.str()
        << " printed=" << x.printed.str() << '\n';
    for (const auto& s : tail_parameter_discrepancies()) d << "tail " << s << '\n';
    std::cout << d.str();
  }
  return 0;
}

struct SimulateArgs {
  std::string plan, family, n, rho, estimator, bandwidth, out, manifest, format = "csv";
  std::optional<std::size_t> reps;
  std::optional<std::uint64_t> seed;
  bool rescale = false;
};

int cmd_simulate(const SimulateArgs& a) {
  if (a.format != "csv") throw DomainError("simulate writes csv only; use plot for graphics");
  KeyValues kv = a.plan.empty() ? KeyValues{} : read_key_values_file(a.plan);
  auto set = [&](const char* key, const char* alias, const std::string& value) {
    if (value.empty()) return;
    kv.erase(alias);
    kv[key] = value;
  };
  set("families", "family", a.family);
  set("n", "n", a.n);
  set("rho", "rho", a.rho);
  set("estimators", "estimator", a.estimator);
  set("selectors", "bandwidth", a.bandwidth);
  if (a.reps) kv["reps"] = std::to_string(*a.reps);
  if (a.seed) kv["seed"] = std::to_string(*a.seed);
  if (a.rescale) kv["rescale_to_m"] = "true";
  const ExperimentPlan plan = plan_from_key_values(kv);

  const auto start = std::chrono::steady_clock::now();
  PlanResult result = run_plan(plan);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.manifest["wall_seconds"] = fmt(wall);

  std::ostringstream csv;
  write_cells_csv(csv, result.cells);
  emit(a.out, csv.str());
  std::ostringstream man;
  write_manifest(man, result.manifest);
  const std::string manifest_path = !a.manifest.empty() ? a.manifest : a.out == "-" ? "" : a.out + ".manifest";
  if (!manifest_path.empty()) emit(manifest_path, man.str());
  for (const auto& c : result.cells)
    if (!c.error.empty())
      std::cerr << "warning: " << c.spec.family.spec() << " n=" << c.spec.n << " rho=" << to_string(c.spec.rho) << ' '
                << to_string(c.spec.estimator) << '/' << c.spec.selector_name() << ": " << c.error << '\n';
  return 0;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError("not a number: '" + s + "'");
}

struct PlotArgs {
  std::string data, out, format = "svg", title;
};

int cmd_plot(const PlotArgs& a) {
  if (a.format != "svg") throw DomainError("plot writes svg only");
  std::ifstream in(a.data);
  if (!in) throw ParseError("cannot open '" + a.data + "'");
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string line, source;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (line.front() == '#') {
      if (line.rfind("# source = ", 0) == 0) source = line.substr(11);
      continue;
    }
    auto cells = split_csv_line(line);
    if (header.empty())
      header = std::move(cells);
    else if (cells.size() != header.size())
      throw ParseError("schema: row with " + std::to_string(cells.size()) + " fields, header has " +
                       std::to_string(header.size()));
    else
      rows.push_back(std::move(cells));
  }
  if (header.empty() || rows.empty()) throw ParseError("schema: '" + a.data + "' has no header or no rows");

  plot::Figure fig;
  const std::vector<std::string> mise_schema{"family", "params",   "n",    "rho",        "m",        "estimator",
                                             "selector", "mean_mise", "sd", "replicates", "failures", "seed"};
  if (header.size() >= 2 && header[0] == "x") {
    fig.title = a.title.empty() ? (source.empty() ? "density estimate" : source) : a.title;
    fig.x_label = "x";
    fig.y_label = "density of the maximum";
    for (std::size_t c = 1; c < header.size(); ++c) {
      plot::Series s{header[c], {}, {}, header[c] == "truth"};
      for (const auto& r : rows) {
        s.x.push_back(to_double(r[0]));
        s.y.push_back(to_double(r[c]));
      }
      fig.series.push_back(std::move(s));
    }
  } else if (header == mise_schema) {
    fig.title = a.title.empty() ? "scaled MISE" : a.title;
    fig.x_label = "n";
    fig.y_label = "mean scaled MISE";
    fig.log_x = fig.log_y = true;
    std::map<std::string, std::size_t> index;
    std::vector<std::pair<RateRow, std::pair<Rational, EstimatorKind>>> keys;
    for (const auto& r : rows) {
      const std::string label = r[0] + "(" + r[1] + ") rho=" + r[3] + " " + r[5] + "/" + r[6];
      auto [it, fresh] = index.emplace(label, fig.series.size());
      if (fresh) {
        fig.series.push_back({label, {}, {}, false});
        keys.push_back({rate_row(TailModel::parse(r[0] + "(" + r[1] + ")")),
                        {parse_rational(r[3]), parse_estimator(r[5])}});
      }
      auto& s = fig.series[it->second];
      s.x.push_back(to_double(r[2]));
      s.y.push_back(to_double(r[7]));
    }
    const std::size_t measured = fig.series.size();
    for (std::size_t i = 0; i < measured; ++i) {
      const auto& s = fig.series[i];
      const auto rate = rate_exponents(keys[i].first, keys[i].second.first)[keys[i].second.second];
      if (!rate.consistent() || s.x.empty()) continue;
      const double slope = static_cast<double>(rate.value().numerator()) / static_cast<double>(rate.value().denominator());
      plot::Series ref{"slope " + rate.str(), {}, {}, true};
      const double x0 = s.x.front(), y0 = s.y.front();
      for (double x : s.x) {
        ref.x.push_back(x);
        ref.y.push_back(y0 * std::pow(x / x0, slope));
      }
      fig.series.push_back(std::move(ref));
    }
  } else {
    throw ParseError("schema: unrecognised header in '" + a.data + "'");
  }
  emit(a.out, plot::render_svg(fig));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Estimation of the density of sample maxima"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config;

  EstimateArgs est;
  auto* e = app.add_subcommand("estimate", "Fit one estimator and write the density curve");
  e->add_option("--config", config, "key = value file mirroring these flags");
  e->add_option("--family", est.family, "Distribution, e.g. pareto(l=1), weibull(k=1), revburr(c=-1,l=-2)");
  e->add_option("--data", est.data, "File with one observation per line");
  e->add_option("--n", est.n, "Sample size for --family")->capture_default_str();
  e->add_option("--m", est.m, "Horizon m (block size)");
  e->add_option("--rho", est.rho, "Horizon as m = n^rho, e.g. 1/4");
  e->add_option("--estimator", est.estimator, "pe, ne1 or ne2")->capture_default_str();
  e->add_option("--bandwidth", est.bandwidth, "cv, pi or oracle")->capture_default_str();
  e->add_option("--kernel", est.kernel, "gaussian, epanechnikov or auto")->capture_default_str();
  e->add_option("--seed", est.seed, "Seed of the synthetic sample")->capture_default_str();
  e->add_option("--out", est.out, "Output file, - for stdout")->capture_default_str();
  e->add_option("--format", est.format, "csv or svg")->check(CLI::IsMember({"csv", "svg"}))->capture_default_str();
  e->add_flag("--rescale-to-m", est.rescale, "Move the parametric fit from block size k to m");

  RatesArgs rat;
  auto* r = app.add_subcommand("rates", "Exact convergence-rate exponents");
  r->add_option("--config", config, "key = value file mirroring these flags");
  r->add_option("--family", rat.family, "';'-separated distributions; default: every tabulated row");
  r->add_option("--rho", rat.rho, "Comma-separated horizons rho")->capture_default_str();
  r->add_option("--out", rat.out, "Output file, - for stdout")->capture_default_str();
  r->add_option("--format", rat.format, "csv")->check(CLI::IsMember({"csv", "svg"}))->capture_default_str();
  r->add_flag("--diff-paper", rat.diff_paper, "Report cells that differ from the printed tables");

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Monte-Carlo scaled MISE of an experiment plan");
  s->add_option("--config", config, "key = value file mirroring these flags");
  s->add_option("--plan", sim.plan, "Plan file (families, n, rho, estimators, selectors, reps, seed, ...)");
  s->add_option("--family", sim.family, "';'-separated distributions");
  s->add_option("--n", sim.n, "Comma-separated sample sizes");
  s->add_option("--rho", sim.rho, "Comma-separated horizons rho");
  s->add_option("--estimator", sim.estimator, "Comma-separated estimators (pe, ne1, ne2)");
  s->add_option("--bandwidth", sim.bandwidth, "Comma-separated selectors (cv, pi, oracle)");
  s->add_option("--reps", sim.reps, "Replicates per cell");
  s->add_option("--seed", sim.seed, "Base seed");
  s->add_option("--out", sim.out, "CSV output file, - for stdout")->required();
  s->add_option("--manifest", sim.manifest, "Manifest file (default: <out>.manifest)");
  s->add_option("--format", sim.format, "csv")->check(CLI::IsMember({"csv", "svg"}))->capture_default_str();
  s->add_flag("--rescale-to-m", sim.rescale, "Move parametric fits from block size k to m");

  PlotArgs plt;
  auto* p = app.add_subcommand("plot", "SVG figure from an estimate or simulate CSV");
  p->add_option("--config", config, "key = value file mirroring these flags");
  p->add_option("--data", plt.data, "CSV written by estimate or simulate")->required();
  p->add_option("--out", plt.out, "SVG output file, - for stdout")->required();
  p->add_option("--format", plt.format, "svg")->check(CLI::IsMember({"csv", "svg"}))->capture_default_str();
  p->add_option("--title", plt.title, "Figure title");

  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv);
  } catch (const Error& ex) {
    std::cerr << "error: " << error_kind(ex) << ": " << ex.what() << '\n';
    return 2;
  }
  std::vector<char*> cargs;
  for (auto& a : args) cargs.push_back(a.data());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& ex) {
    return app.exit(ex);
  }

  try {
    if (*e) return cmd_estimate(est);
    if (*r) return cmd_rates(rat);
    if (*s) return cmd_simulate(sim);
    if (*p) return cmd_plot(plt);
  } catch (const Error& ex) {
    std::cerr << "error: " << error_kind(ex) << ": " << ex.what() << '\n';
    return 1;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 1;
}
