#include "maxdens/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cmath>

#include "maxdens/asymptotics.hpp"
#include "maxdens/errors.hpp"
#include "maxdens/kde_ops.hpp"

namespace maxdens {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string lower(std::string_view s) {
  std::string out;
  for (char c : s) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

BlockMaxima block_maxima(std::span<const double> sample, std::size_t k) {
  if (k == 0) throw DomainError("block size must be at least 1");
  if (sample.empty() || sample.size() % k != 0)
    throw NonDivisibleBlock("block size " + std::to_string(k) + " does not divide n = " +
                            std::to_string(sample.size()));
  BlockMaxima bm;
  bm.block_size = k;
  bm.blocks.reserve(sample.size() / k);
  for (std::size_t start = 0; start < sample.size(); start += k)
    bm.blocks.push_back(*std::max_element(sample.begin() + static_cast<long>(start),
                                          sample.begin() + static_cast<long>(start + k)));
  return bm;
}

GevFitResult fit_gev_mle(const BlockMaxima& blocks, const GevFitOptions& options) {
  return fit_gev(blocks.blocks, options);
}

GevParams rescale_gev(const GevParams& fit, double m, double k) {
  if (!(m > 0.0 && k > 0.0)) throw DomainError("rescaling needs m > 0 and k > 0");
  const double lt = std::log(m / k);
  if (std::abs(fit.gamma) < kGammaSwitch) return {fit.gamma, fit.a, fit.b + fit.a * lt};
  const double tg = std::exp(fit.gamma * lt);
  return {fit.gamma, fit.a * tg, fit.b + fit.a * std::expm1(fit.gamma * lt) / fit.gamma};
}

double pe_density(const GevParams& fit, double m, double k, double x, bool rescale_to_m) {
  fit.validate();
  return gev_pdf(rescale_to_m ? rescale_gev(fit, m, k) : fit, x);
}

double ne1_density(std::span<const double> sample, double h1, double h2, const KernelSpec& kernel1,
                   const KernelSpec& kernel2, double m, double x) {
  if (!(h1 > 0.0 && h2 > 0.0)) throw DomainError("bandwidths must be positive");
  if (sample.empty()) throw DomainError("NE1 needs at least one observation");
  if (!(m >= 1.0)) throw DomainError("NE1 needs m >= 1");
  const double xs[] = {x};
  const double f = reference::kde_density(sample, h1, kernel1, xs)[0];
  if (m == 1.0) return f;
  const double F = clamp01(reference::kde_cdf(sample, h2, kernel2, xs)[0]);
  return m * f * std::pow(F, m - 1.0);
}

double ne2_density(const BlockMaxima& blocks, double h, const KernelSpec& kernel, double x) {
  if (!(h > 0.0)) throw DomainError("bandwidth must be positive");
  if (blocks.blocks.empty()) throw InsufficientBlocks("NE2 needs at least one block maximum");
  const double xs[] = {x};
  return reference::kde_density(blocks.blocks, h, kernel, xs)[0];
}

EstimatorFit EstimatorFit::pe(const GevFitResult& fit, std::size_t m, std::size_t k, bool rescale_to_m) {
  fit.params.validate();
  EstimatorFit e(EstimatorKind::pe, m);
  e.k_ = k;
  e.fit_ = fit;
  e.rescaled_ = rescale_to_m && m != k;
  e.gev_ = e.rescaled_ ? rescale_gev(fit.params, static_cast<double>(m), static_cast<double>(k)) : fit.params;
  return e;
}

EstimatorFit EstimatorFit::ne1(std::vector<double> sample, double h1, double h2, const KernelSpec& kernel1,
                               const KernelSpec& kernel2, std::size_t m) {
  if (!(h1 > 0.0 && h2 > 0.0) || !std::isfinite(h1) || !std::isfinite(h2))
    throw DomainError("NE1 bandwidths must be positive and finite");
  if (sample.empty()) throw DomainError("NE1 needs at least one observation");
  if (m == 0) throw DomainError("NE1 needs m >= 1");
  EstimatorFit e(EstimatorKind::ne1, m);
  std::sort(sample.begin(), sample.end());
  e.sorted_ = std::move(sample);
  e.h1_ = h1;
  e.h2_ = h2;
  e.kernel1_ = kernel1;
  e.kernel2_ = kernel2;
  return e;
}

EstimatorFit EstimatorFit::ne2(const BlockMaxima& blocks, double h, const KernelSpec& kernel) {
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("NE2 bandwidth must be positive and finite");
  if (blocks.n_blocks() < 2) throw InsufficientBlocks("NE2 needs at least two block maxima");
  EstimatorFit e(EstimatorKind::ne2, blocks.block_size);
  e.sorted_ = blocks.blocks;
  std::sort(e.sorted_.begin(), e.sorted_.end());
  e.h1_ = h;
  e.kernel1_ = kernel;
  return e;
}

double EstimatorFit::operator()(double x) const {
  const double xs[] = {x};
  return evaluate(xs)[0];
}

std::vector<double> EstimatorFit::evaluate(std::span<const double> xs) const {
  switch (kind_) {
    case EstimatorKind::pe: {
      std::vector<double> out(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) out[i] = gev_pdf(gev_, xs[i]);
      return out;
    }
    case EstimatorKind::ne1: {
      auto f = kde_density(sorted_, h1_, kernel1_, xs);
      if (m_ == 1) return f;
      const auto F = kde_cdf(sorted_, h2_, kernel2_, xs);
      const double m = static_cast<double>(m_);
      for (std::size_t i = 0; i < xs.size(); ++i) f[i] = m * f[i] * std::pow(clamp01(F[i]), m - 1.0);
      return f;
    }
    case EstimatorKind::ne2:
      return kde_density(sorted_, h1_, kernel1_, xs);
  }
  return {};
}

std::vector<std::pair<std::string, std::string>> EstimatorFit::describe() const {
  std::vector<std::pair<std::string, std::string>> d{{"estimator", to_string(kind_)}, {"m", std::to_string(m_)}};
  switch (kind_) {
    case EstimatorKind::pe:
      d.emplace_back("k", std::to_string(k_));
      d.emplace_back("gamma", fmt(gev_.gamma));
      d.emplace_back("a", fmt(gev_.a));
      d.emplace_back("b", fmt(gev_.b));
      d.emplace_back("rescaled_to_m", rescaled_ ? "true" : "false");
      d.emplace_back("converged", fit_.converged ? "true" : "false");
      d.emplace_back("gradient_norm", fmt(fit_.gradient_norm));
      break;
    case EstimatorKind::ne1:
      d.emplace_back("h1", fmt(h1_));
      d.emplace_back("h2", fmt(h2_));
      d.emplace_back("kernel", kernel1_.name());
      break;
    case EstimatorKind::ne2:
      d.emplace_back("h", fmt(h1_));
      d.emplace_back("blocks", std::to_string(sorted_.size()));
      d.emplace_back("kernel", kernel1_.name());
      break;
  }
  return d;
}

std::string to_string(Selector selector) {
  switch (selector) {
    case Selector::cv: return "cv";
    case Selector::pi: return "pi";
    case Selector::oracle: return "oracle";
  }
  return {};
}

Selector parse_selector(std::string_view s) {
  const std::string v = lower(s);
  if (v == "cv") return Selector::cv;
  if (v == "pi") return Selector::pi;
  if (v == "oracle") return Selector::oracle;
  throw ParseError("unknown bandwidth rule '" + std::string(s) + "' (expected cv, pi or oracle)");
}

EstimatorKind parse_estimator(std::string_view s) {
  const std::string v = lower(s);
  if (v == "pe") return EstimatorKind::pe;
  if (v == "ne1") return EstimatorKind::ne1;
  if (v == "ne2") return EstimatorKind::ne2;
  throw ParseError("unknown estimator '" + std::string(s) + "' (expected pe, ne1 or ne2)");
}

FittedEstimator fit_estimator(std::span<const double> sample, const FitRequest& request) {
  if (request.m == 0) throw DomainError("m must be at least 1");
  KernelSpec kernel = request.kernel ? *request.kernel
                      : request.model ? KernelSpec::for_tail(request.model->tail())
                                      : KernelSpec::gaussian();
  auto need_model = [&]() -> const TailModel& {
    if (!request.model) throw DomainError("oracle bandwidths need the true distribution");
    return *request.model;
  };

  switch (request.kind) {
    case EstimatorKind::pe: {
      const std::size_t k = request.k == 0 ? request.m : request.k;
      const BlockMaxima bm = block_maxima(sample, k);
      const GevFitResult fit = fit_gev_mle(bm, request.gev_options);
      return {EstimatorFit::pe(fit, request.m, k, request.rescale_to_m), {}};
    }
    case EstimatorKind::ne1: {
      std::vector<BandwidthSelection> sel;
      double h1 = 0.0, h2 = 0.0;
      switch (request.selector) {
        case Selector::cv:
          sel.push_back(ucv_density(sample, kernel));
          sel.push_back(cv_cdf(sample, kernel));
          h1 = sel[0].value;
          h2 = sel[1].value;
          break;
        case Selector::pi:
          sel.push_back(sj_density(sample, kernel));
          sel.push_back(al_cdf(sample, kernel));
          h1 = sel[0].value;
          h2 = sel[1].value;
          break;
        case Selector::oracle: {
          const TailModel& model = need_model();
          const double m = static_cast<double>(request.m);
          const double x = x_rule(model.tail(), m, request.delta);
          const auto o = oracle_ne1(model, kernel, kernel, static_cast<double>(sample.size()), m, x);
          h1 = o.h1;
          h2 = o.h2;
          sel.emplace_back(BandwidthMethod::oracle_ne1, h1);
          sel.emplace_back(BandwidthMethod::oracle_ne1, h2);
          break;
        }
      }
      return {EstimatorFit::ne1(std::vector<double>(sample.begin(), sample.end()), h1, h2, kernel, kernel,
                                request.m),
              std::move(sel)};
    }
    case EstimatorKind::ne2: {
      const BlockMaxima bm = block_maxima(sample, request.m);
      if (bm.n_blocks() < 2) throw InsufficientBlocks("NE2 needs at least two block maxima");
      std::vector<BandwidthSelection> sel;
      switch (request.selector) {
        case Selector::cv:
          sel.push_back(ucv_density(bm.blocks, kernel));
          break;
        case Selector::pi:
          sel.push_back(sj_density(bm.blocks, kernel));
          break;
        case Selector::oracle: {
          const TailModel& model = need_model();
          const double m = static_cast<double>(request.m);
          const double x = x_rule(model.tail(), m, request.delta);
          sel.emplace_back(BandwidthMethod::oracle_ne2,
                           oracle_ne2(model, kernel, static_cast<double>(sample.size()), m, x));
          break;
        }
      }
      return {EstimatorFit::ne2(bm, sel[0].value, kernel), std::move(sel)};
    }
  }
  throw DomainError("unknown estimator");
}

}  // namespace maxdens
