#include "maxdens/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

#include "maxdens/asymptotics.hpp"
#include "maxdens/errors.hpp"
#include "maxdens/kde_ops.hpp"
#include "maxdens/pair_differences.hpp"

namespace maxdens {

std::string to_string(BandwidthMethod method) {
  switch (method) {
    case BandwidthMethod::ucv_density: return "ucv_density";
    case BandwidthMethod::cv_cdf: return "cv_cdf";
    case BandwidthMethod::sj_density: return "sj_density";
    case BandwidthMethod::al_cdf: return "al_cdf";
    case BandwidthMethod::oracle_ne1: return "oracle_ne1";
    case BandwidthMethod::oracle_ne2: return "oracle_ne2";
  }
  return {};
}

std::string to_string(SelectionStatus status) {
  switch (status) {
    case SelectionStatus::ok: return "ok";
    case SelectionStatus::no_interior_minimum: return "no_interior_minimum";
    case SelectionStatus::root_not_bracketed: return "root_not_bracketed";
    case SelectionStatus::degenerate_functional: return "degenerate_functional";
  }
  return {};
}

namespace {

constexpr int kGridPoints = 64;
constexpr int kCdfGrid = 512;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

double quantile7(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(i);
  if (i + 1 >= sorted.size()) return sorted.back();
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

std::vector<double> sorted_copy(std::span<const double> sample) {
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  return x;
}

double sample_sd(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (n - 1.0));
}

// Scale of the sample for brackets and pilots; throws when it is zero.
double checked_scale(std::span<const double> sample, std::size_t min_n, const char* who) {
  if (sample.size() < 2) throw DomainError(std::string(who) + " needs at least two observations");
  const double s = robust_scale(sample);
  if (!(s > 0.0) || !std::isfinite(s))
    throw BandwidthError(std::string(who) + ": no interior minimum, the sample has no spread");
  if (sample.size() < min_n)
    throw DomainError(std::string(who) + " needs at least " + std::to_string(min_n) + " observations");
  return s;
}

// 64-point log grid over [lo, hi], then golden-section search on log h
// around the best grid point.
BandwidthSelection minimize_on_bracket(BandwidthMethod method, double lo, double hi,
                                       const std::function<double(double)>& objective) {
  BandwidthSelection sel(method);
  std::vector<double> grid(kGridPoints);
  const double llo = std::log(lo), lhi = std::log(hi);
  int best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGridPoints; ++i) {
    grid[i] = std::exp(llo + (lhi - llo) * i / (kGridPoints - 1));
    const double v = objective(grid[i]);
    sel.trace.emplace_back(grid[i], v);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  if (!std::isfinite(best_value)) throw BandwidthError(to_string(method) + ": objective not finite on the bracket");
  if (best == 0 || best == kGridPoints - 1) {
    sel.value = grid[best];
    sel.status = SelectionStatus::no_interior_minimum;
    return sel;
  }
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::log(grid[best - 1]), b = std::log(grid[best + 1]);
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = objective(std::exp(c)), fd = objective(std::exp(d));
  sel.trace.emplace_back(std::exp(c), fc);
  sel.trace.emplace_back(std::exp(d), fd);
  while (b - a > 1e-6) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = objective(std::exp(c));
      sel.trace.emplace_back(std::exp(c), fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = objective(std::exp(d));
      sel.trace.emplace_back(std::exp(d), fd);
    }
  }
  const double h = std::exp(0.5 * (a + b));
  const double fh = objective(h);
  sel.trace.emplace_back(h, fh);
  // golden refinement can only be kept if it beats the grid point
  sel.value = fh <= best_value ? h : grid[best];
  return sel;
}

double ucv_from_pairs(const PairDifferences& pairs, const KernelSpec& kernel, double h) {
  const double n = static_cast<double>(pairs.sample_size());
  const double conv = pairs.sum([&](double d) { return kernel.conv(d / h); });
  const double loo = pairs.sum([&](double d) { return kernel.k(d / h); });
  return kernel.r() / (n * h) + 2.0 * conv / (n * n * h) - 4.0 * loo / (n * (n - 1.0) * h);
}

// Per grid point, the leave-one-out CDF criterion summed over observations.
double cv_cdf_from_sorted(const std::vector<double>& x, const KernelSpec& kernel, double h) {
  const std::size_t n = x.size();
  const double nn = static_cast<double>(n);
  const double lo = x.front(), hi = x.back();
  const double step = (hi - lo) / kCdfGrid;
  const double radius = h > 0.0 ? kernel.cutoff() * h : 0.0;
  std::vector<double> values(kCdfGrid);
#pragma omp parallel for schedule(static)
  for (int g = 0; g < kCdfGrid; ++g) {
    const double xg = lo + step * (g + 0.5);
    const auto below = static_cast<std::size_t>(std::lower_bound(x.begin(), x.end(), xg - radius) - x.begin());
    const auto above = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), xg + radius) - x.begin());
    const auto L = static_cast<double>(std::upper_bound(x.begin(), x.end(), xg) - x.begin());
    double S = static_cast<double>(below), T = S, U = S;
    for (std::size_t i = below; i < above; ++i) {
      const double k = h > 0.0 ? kernel.K((xg - x[i]) / h) : (x[i] <= xg ? 1.0 : 0.0);
      S += k;
      U += k * k;
      if (x[i] <= xg) T += k;
    }
    const double c = S / (nn - 1.0);
    values[g] = L * (1.0 - c) * (1.0 - c) + (nn - L) * c * c + 2.0 / (nn - 1.0) * (T - c * S) +
                U / ((nn - 1.0) * (nn - 1.0));
  }
  // midpoint rule keeps the nodes off the sample extremes
  double integral = 0.0;
  for (double v : values) integral += v;
  return integral * step / nn;
}

double phi4(double u) {
  const double u2 = u * u;
  return (u2 * u2 - 6.0 * u2 + 3.0) * kInvSqrt2Pi * std::exp(-0.5 * u2);
}

double phi6(double u) {
  const double u2 = u * u;
  return (u2 * u2 * u2 - 15.0 * u2 * u2 + 45.0 * u2 - 15.0) * kInvSqrt2Pi * std::exp(-0.5 * u2);
}

// Estimates of int f''^2 and -int f'''^2 with a Gaussian pilot, diagonal included.
double sj_S(const PairDifferences& pairs, double g) {
  const double n = static_cast<double>(pairs.sample_size());
  const double s = 2.0 * pairs.sum([&](double d) { return phi4(d / g); }) + n * phi4(0.0);
  return s / (n * (n - 1.0) * std::pow(g, 5));
}

double sj_T(const PairDifferences& pairs, double g) {
  const double n = static_cast<double>(pairs.sample_size());
  const double s = 2.0 * pairs.sum([&](double d) { return phi6(d / g); }) + n * phi6(0.0);
  return -s / (n * (n - 1.0) * std::pow(g, 7));
}

}  // namespace

double robust_scale(std::span<const double> sample) {
  if (sample.size() < 2) return 0.0;
  const auto x = sorted_copy(sample);
  const double sd = sample_sd(x);
  const double iqr = (quantile7(x, 0.75) - quantile7(x, 0.25)) / 1.349;
  return iqr > 0.0 ? std::min(sd, iqr) : sd;
}

double ucv_objective(std::span<const double> sample, const KernelSpec& kernel, double h) {
  if (!(h > 0.0)) throw DomainError("bandwidth must be positive");
  return ucv_from_pairs(PairDifferences(sample), kernel, h);
}

BandwidthSelection ucv_density(std::span<const double> sample, const KernelSpec& kernel) {
  const double s = checked_scale(sample, 4, "ucv_density");
  const double n = static_cast<double>(sample.size());
  const PairDifferences pairs(sample);
  return minimize_on_bracket(BandwidthMethod::ucv_density, s / n, s * std::pow(n, -0.1),
                             [&](double h) { return ucv_from_pairs(pairs, kernel, h); });
}

double cv_cdf_objective(std::span<const double> sample, const KernelSpec& kernel, double h) {
  if (sample.size() < 2) throw DomainError("cv_cdf needs at least two observations");
  if (!(h >= 0.0)) throw DomainError("bandwidth must be nonnegative");
  return cv_cdf_from_sorted(sorted_copy(sample), kernel, h);
}

BandwidthSelection cv_cdf(std::span<const double> sample, const KernelSpec& kernel) {
  const double s = checked_scale(sample, 4, "cv_cdf");
  const double n = static_cast<double>(sample.size());
  const auto x = sorted_copy(sample);
  return minimize_on_bracket(BandwidthMethod::cv_cdf, s / n, s * std::pow(n, -0.1),
                             [&](double h) { return cv_cdf_from_sorted(x, kernel, h); });
}

BandwidthSelection sj_density(std::span<const double> sample, const KernelSpec& kernel) {
  const double scale = checked_scale(sample, 10, "sj_density");
  const double n = static_cast<double>(sample.size());
  const KernelMoments km = kernel.moments();
  const PairDifferences pairs(sample);
  BandwidthSelection sel(BandwidthMethod::sj_density);

  const double a = 1.24 * scale * std::pow(n, -1.0 / 7.0);
  const double b = 1.23 * scale * std::pow(n, -1.0 / 9.0);
  const double c1 = km.r / (n * km.m2 * km.m2);
  const double alpha2 = std::pow(2.0 * phi4(0.0) * km.m2 * km.m2 * sj_S(pairs, a) / (km.r * sj_T(pairs, b)), 1.0 / 7.0);
  const double normal_ref = std::pow(8.0 * std::sqrt(std::numbers::pi) * km.r / (3.0 * km.m2 * km.m2 * n), 0.2) * scale;

  auto equation = [&](double h) {
    const double S = sj_S(pairs, alpha2 * std::pow(h, 5.0 / 7.0));
    const double v = std::pow(c1 / S, 0.2) - h;
    sel.trace.emplace_back(h, v);
    return v;
  };

  if (!std::isfinite(alpha2) || !(alpha2 > 0.0)) {
    sel.value = normal_ref;
    sel.status = SelectionStatus::root_not_bracketed;
    return sel;
  }
  const double hmax = 1.144 * scale * std::pow(n, -0.2);
  double lower = 0.1 * hmax, upper = hmax;
  double flo = equation(lower), fhi = equation(upper);
  int tries = 1;
  while (!(flo * fhi <= 0.0)) {
    if (tries > 99 || !std::isfinite(flo) || !std::isfinite(fhi)) {
      sel.value = normal_ref;
      sel.status = SelectionStatus::root_not_bracketed;
      return sel;
    }
    if (tries % 2) {
      upper *= 1.2;
      fhi = equation(upper);
    } else {
      lower /= 1.2;
      flo = equation(lower);
    }
    ++tries;
  }
  while (upper - lower > 1e-6 * upper) {
    const double mid = 0.5 * (lower + upper);
    const double fm = equation(mid);
    if ((fm <= 0.0) == (flo <= 0.0)) {
      lower = mid;
      flo = fm;
    } else {
      upper = mid;
    }
  }
  sel.value = 0.5 * (lower + upper);
  return sel;
}

BandwidthSelection al_cdf(std::span<const double> sample, const KernelSpec& kernel) {
  const double scale = checked_scale(sample, 10, "al_cdf");
  const double n = static_cast<double>(sample.size());
  const KernelMoments km = kernel.moments();
  const auto x = sorted_copy(sample);
  const double pilot = scale * std::pow(n, -1.0 / 3.0);
  const KernelSpec gauss = KernelSpec::gaussian();
  const auto f = kde_density(x, pilot, gauss, x);
  const auto df = kde_derivative(x, pilot, gauss, x);
  double c1 = 0.0, c2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    c1 += f[i];
    c2 += df[i] * df[i];
  }
  c1 /= n;
  c2 /= n;
  BandwidthSelection sel(BandwidthMethod::al_cdf);
  if (!(c2 > 0.0) || !std::isfinite(c1 / c2)) {
    sel.value = scale * std::cbrt(6.0 * std::sqrt(3.0) * std::sqrt(std::numbers::pi) * km.s / (n * km.m2 * km.m2));
    sel.status = SelectionStatus::degenerate_functional;
    return sel;
  }
  sel.value = std::cbrt(2.0 * km.s * c1 / (n * km.m2 * km.m2 * c2));
  return sel;
}

OracleNe1 oracle_ne1(const TailModel& model, const KernelSpec& kernel1, const KernelSpec& kernel2, double n,
                     double m, double x) {
  const TailClass& tail = model.tail();
  const double g = tail.gamma();
  const double M = mn_kn(tail, m, m, x).M;
  const double f = model.pdf(x);
  const KernelMoments k1 = kernel1.moments();
  const KernelMoments k2 = kernel2.moments();
  const double psi = psi_n(tail, x);
  const double xi = xi_n(tail, x);
  const double h1 = std::pow(std::pow(M, -2.0 - 6.0 * g) * std::pow(m, 2.0 + 6.0 * g) * f * k1.r /
                                 (psi * psi * n * k1.m2 * k1.m2),
                             0.2);
  const double h2 = std::cbrt(2.0 * omega_n(tail, x) * k2.s / (xi * xi * n * k2.m2 * k2.m2));
  return {h1, h2};
}

double oracle_ne2(const TailModel& model, const KernelSpec& kernel, double n, double m, double x) {
  const KernelMoments km = kernel.moments();
  const double f = model.pdf(x);
  const double phi = phi_n(model.tail(), m, x);
  return std::pow(km.r / (n * f * phi * phi * km.m2 * km.m2), 0.2);
}

}  // namespace maxdens
