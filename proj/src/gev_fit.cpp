#include "maxdens/gev_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include "maxdens/errors.hpp"

namespace maxdens {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEulerGamma = 0.57721566490153286061;

using Point = std::array<double, 3>;  // (gamma, log a, b)

GevParams to_params(const Point& p) { return {p[0], std::exp(p[1]), p[2]}; }
Point to_point(const GevParams& g) { return {g.gamma, std::log(g.a), g.b}; }

// (y/(1+y) - log1p(y)) / y^2 for the derivative of log1p(gamma z)/gamma in gamma
double dlog_ratio(double y) {
  if (std::abs(y) < 1e-3) {
    double term = 1.0, sum = 0.0;
    for (int k = 2; k <= 9; ++k) {
      sum += (k % 2 == 0 ? -1.0 : 1.0) * (k - 1.0) / k * term;
      term *= y;
    }
    return sum;
  }
  return (y / (1.0 + y) - std::log1p(y)) / (y * y);
}

double negative_mean_loglik(std::span<const double> data, const Point& p) {
  if (!(p[0] > -1.0) || !std::isfinite(p[1]) || !std::isfinite(p[2])) return kInf;
  const double ll = gev_log_likelihood(data, to_params(p));
  return std::isfinite(ll) ? -ll / static_cast<double>(data.size()) : kInf;
}

double norm(const Point& g) { return std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]); }

struct SimplexResult {
  Point x;
  double f;
};

SimplexResult nelder_mead(std::span<const double> data, Point start, int max_iter) {
  std::array<Point, 4> s{start, start, start, start};
  s[1][0] += 0.1;
  s[2][1] += 0.1;
  s[3][2] += 0.1;
  std::array<double, 4> f{};
  for (int i = 0; i < 4; ++i) f[i] = negative_mean_loglik(data, s[i]);

  auto order = [&] {
    std::array<int, 4> idx{0, 1, 2, 3};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return f[a] < f[b]; });
    std::array<Point, 4> s2;
    std::array<double, 4> f2;
    for (int i = 0; i < 4; ++i) {
      s2[i] = s[idx[i]];
      f2[i] = f[idx[i]];
    }
    s = s2;
    f = f2;
  };
  auto along = [](const Point& c, const Point& w, double t) {
    Point r;
    for (int j = 0; j < 3; ++j) r[j] = c[j] + t * (w[j] - c[j]);
    return r;
  };

  for (int it = 0; it < max_iter; ++it) {
    order();
    if (std::isfinite(f[3]) && std::abs(f[3] - f[0]) <= 1e-15 * (1.0 + std::abs(f[0]))) break;
    Point c{0, 0, 0};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) c[j] += s[i][j] / 3.0;
    const Point xr = along(c, s[3], -1.0);
    const double fr = negative_mean_loglik(data, xr);
    if (fr < f[0]) {
      const Point xe = along(c, s[3], -2.0);
      const double fe = negative_mean_loglik(data, xe);
      if (fe < fr) {
        s[3] = xe;
        f[3] = fe;
      } else {
        s[3] = xr;
        f[3] = fr;
      }
      continue;
    }
    if (fr < f[2]) {
      s[3] = xr;
      f[3] = fr;
      continue;
    }
    const bool outside = fr < f[3];
    const Point xc = along(c, s[3], outside ? -0.5 : 0.5);
    const double fc = negative_mean_loglik(data, xc);
    if (fc < (outside ? fr : f[3])) {
      s[3] = xc;
      f[3] = fc;
      continue;
    }
    for (int i = 1; i < 4; ++i) {
      s[i] = along(s[0], s[i], 0.5);
      f[i] = negative_mean_loglik(data, s[i]);
    }
  }
  order();
  return {s[0], f[0]};
}

// Solves H d = -g for a symmetric 3x3 system; false if singular.
bool newton_step(const std::array<Point, 3>& H, const Point& g, Point& d) {
  const double det = H[0][0] * (H[1][1] * H[2][2] - H[1][2] * H[2][1]) -
                     H[0][1] * (H[1][0] * H[2][2] - H[1][2] * H[2][0]) +
                     H[0][2] * (H[1][0] * H[2][1] - H[1][1] * H[2][0]);
  if (!std::isfinite(det) || std::abs(det) < 1e-300) return false;
  auto col = [&](int c) {
    std::array<Point, 3> M = H;
    for (int r = 0; r < 3; ++r) M[r][c] = -g[r];
    return M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
           M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
           M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
  };
  for (int j = 0; j < 3; ++j) d[j] = col(j) / det;
  return std::isfinite(d[0]) && std::isfinite(d[1]) && std::isfinite(d[2]);
}

Point polish(std::span<const double> data, Point x, int iterations, double tol) {
  double fx = negative_mean_loglik(data, x);
  for (int it = 0; it < iterations; ++it) {
    const Point g = gev_score_mean(data, to_params(x));
    if (norm(g) < tol) break;
    std::array<Point, 3> H{};
    for (int j = 0; j < 3; ++j) {
      const double step = 1e-5 * std::max(1.0, std::abs(x[j]));
      Point xp = x, xm = x;
      xp[j] += step;
      xm[j] -= step;
      const Point gp = gev_score_mean(data, to_params(xp));
      const Point gm = gev_score_mean(data, to_params(xm));
      for (int i = 0; i < 3; ++i) H[i][j] = (gp[i] - gm[i]) / (2 * step);
    }
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) H[i][j] = H[j][i] = 0.5 * (H[i][j] + H[j][i]);
    // the score is the gradient of +loglik; Newton for a maximum solves H d = -g
    Point d;
    if (!newton_step(H, g, d)) break;
    bool accepted = false;
    for (double t = 1.0; t > 1e-4; t *= 0.5) {
      Point xn{x[0] + t * d[0], x[1] + t * d[1], x[2] + t * d[2]};
      const double fn = negative_mean_loglik(data, xn);
      if (std::isfinite(fn) && fn <= fx + 1e-13 * (1.0 + std::abs(fx))) {
        x = xn;
        fx = fn;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return x;
}

}  // namespace

double gev_log_likelihood(std::span<const double> data, const GevParams& p) {
  double ll = 0.0;
  for (double y : data) {
    const double v = gev_logpdf(p, y);
    if (!std::isfinite(v)) return -kInf;
    ll += v;
  }
  return ll;
}

std::array<double, 3> gev_score_mean(std::span<const double> data, const GevParams& p) {
  // l = -log a - L - A - exp(-A), L = log1p(gamma z), A = L / gamma
  Point g{0, 0, 0};
  const bool gumbel = std::abs(p.gamma) < kGammaSwitch;
  for (double y : data) {
    const double z = (y - p.b) / p.a;
    double t, A, dA_dgamma;
    if (gumbel) {
      t = 1.0;
      A = z;
      dA_dgamma = -0.5 * z * z;
    } else {
      const double gz = p.gamma * z;
      t = 1.0 + gz;
      A = std::log1p(gz) / p.gamma;
      dA_dgamma = z * z * dlog_ratio(gz);
    }
    const double e = std::exp(-A);
    const double dl_dz = -(p.gamma + 1.0 - e) / t;
    g[0] += -z / t - dA_dgamma * (1.0 - e);
    g[1] += -1.0 - z * dl_dz;
    g[2] += -dl_dz / p.a;
  }
  const double n = static_cast<double>(data.size());
  for (auto& v : g) v /= n;
  return g;
}

GevParams gev_pwm(std::span<const double> data) {
  const std::size_t n = data.size();
  if (n < 3) throw DomainError("PWM estimates need at least three points");
  std::vector<double> x(data.begin(), data.end());
  std::sort(x.begin(), x.end());
  double b0 = 0, b1 = 0, b2 = 0;
  const double nn = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double j = static_cast<double>(i);
    b0 += x[i];
    b1 += j / (nn - 1) * x[i];
    b2 += j * (j - 1) / ((nn - 1) * (nn - 2)) * x[i];
  }
  b0 /= nn;
  b1 /= nn;
  b2 /= nn;
  const double l2 = 2 * b1 - b0;
  if (!(l2 > 0)) throw DomainError("PWM estimates need spread in the data");
  const double c = l2 / (3 * b2 - b0) - std::log(2.0) / std::log(3.0);
  const double k = 7.8590 * c + 2.9554 * c * c;  // Hosking's shape, k = -gamma
  if (std::abs(k) < 1e-6) {
    const double a = l2 / std::log(2.0);
    return {0.0, a, b0 - kEulerGamma * a};
  }
  const double gk = std::tgamma(1 + k);
  const double a = l2 * k / (gk * (1 - std::pow(2.0, -k)));
  return {-k, a, b0 - a * (1 - gk) / k};
}

GevFitResult fit_gev(std::span<const double> data, const GevFitOptions& options) {
  const std::size_t n = data.size();
  if (n < std::max<std::size_t>(options.min_blocks, 3))
    throw FitDiverged("GEV fit needs at least " + std::to_string(std::max<std::size_t>(options.min_blocks, 3)) +
                      " block maxima, got " + std::to_string(n));
  const double mean = std::accumulate(data.begin(), data.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double y : data) ss += (y - mean) * (y - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0) || !std::isfinite(sd)) throw FitDiverged("GEV fit on constant or non-finite data");

  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = (data[i] - mean) / sd;

  std::vector<Point> starts;
  GevParams pwm{0.0, 1.0, 0.0};
  try {
    pwm = gev_pwm(z);
    pwm.gamma = std::clamp(pwm.gamma, -0.9, 5.0);
  } catch (const DomainError&) {
  }
  starts.push_back(to_point(pwm));
  const double a_gumbel = std::sqrt(6.0) / std::numbers::pi;
  starts.push_back({0.0, std::log(a_gumbel), -kEulerGamma * a_gumbel});
  starts.push_back({pwm.gamma * 0.5 + 0.1, std::log(pwm.a * 1.2), pwm.b - 0.1 * pwm.a});

  // A start outside the support is moved until every point fits inside.
  for (auto& s : starts) {
    for (int tries = 0; tries < 60 && !std::isfinite(negative_mean_loglik(z, s)); ++tries) {
      s[0] *= 0.5;
      s[1] += 0.2;
    }
  }

  bool found = false;
  SimplexResult best{{0, 0, 0}, kInf};
  int best_start = 0;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    if (!std::isfinite(negative_mean_loglik(z, starts[i]))) continue;
    auto r = nelder_mead(z, starts[i], options.simplex_iterations);
    // a restart from the optimum shakes off premature simplex collapse
    r = nelder_mead(z, r.x, options.simplex_iterations);
    if (std::isfinite(r.f) && (!found || r.f < best.f)) {
      best = r;
      best_start = static_cast<int>(i);
      found = true;
    }
  }
  if (!found) throw FitDiverged("GEV likelihood is not finite at any starting point");

  const Point x = polish(z, best.x, options.newton_iterations, options.gradient_tol);
  const GevParams std_params = to_params(x);
  const double gnorm = norm(gev_score_mean(z, std_params));

  GevFitResult result;
  result.params = {std_params.gamma, std_params.a * sd, mean + sd * std_params.b};
  result.log_likelihood = gev_log_likelihood(data, result.params);
  result.gradient_norm = gnorm;
  result.converged = gnorm < options.gradient_tol && std_params.gamma > -1.0 + 1e-6;
  result.start = best_start;
  return result;
}

}  // namespace maxdens
