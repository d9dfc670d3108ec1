#include "maxdens/asymptotics.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>

#include "maxdens/errors.hpp"
#include "maxdens/gev.hpp"

namespace maxdens {

double x_rule(const TailClass& tail, double m, double delta) {
  if (!(delta > 0.0)) throw DomainError("x rule requires delta > 0");
  if (!(m >= 1.0)) throw DomainError("x rule requires m >= 1");
  switch (tail.tag()) {
    case TailTag::hall: {
      const auto& h = tail.hall();
      return std::pow(h.A * m / delta, 1.0 / h.alpha);
    }
    case TailTag::weibull: {
      const auto& w = tail.weibull();
      if (!(m > delta)) throw DomainError("Weibull x rule requires m > delta");
      return std::pow(std::log(m / delta) / w.C, 1.0 / w.kappa);
    }
    case TailTag::bounded: {
      const auto& b = tail.bounded();
      return b.xstar - std::pow(delta / (b.D * m), -1.0 / b.mu);
    }
  }
  return 0.0;
}

MnKn mn_kn(const TailClass& tail, double m, double k, double x) {
  switch (tail.tag()) {
    case TailTag::hall: {
      const auto& h = tail.hall();
      if (!(x > 0.0)) throw DomainError("Hall-class scalings need x > 0");
      const double s = h.A * std::pow(x, -h.alpha);
      return {m * s, k * s};
    }
    case TailTag::weibull: {
      const auto& w = tail.weibull();
      if (!(x > 0.0)) throw DomainError("Weibull-class scalings need x > 0");
      const double theta = 1.0 - 1.0 / w.kappa;
      const double M = m * std::exp(-w.C * std::pow(x, w.kappa));
      const double K = std::pow(k, w.kappa) *
                       std::exp(-w.kappa * std::pow(w.C, 1.0 / w.kappa) * std::pow(std::log(k), theta) * x);
      return {M, K};
    }
    case TailTag::bounded: {
      const auto& b = tail.bounded();
      const double t = b.xstar - x;
      if (!(t > 0.0)) throw DomainError("bounded-class scalings need x < x*");
      const double s = b.D * std::pow(t, -b.mu);
      return {m * s, k * s};
    }
  }
  return {0.0, 0.0};
}

double lambda_n(const TailClass& tail, double k, double m) {
  switch (tail.tag()) {
    case TailTag::hall:
      return k * std::pow(m, -2.0 * tail.hall().beta);
    case TailTag::weibull: {
      const double lm = std::log(m);
      return k / (lm * lm);
    }
    case TailTag::bounded:
      return k * std::pow(m, 2.0 * tail.bounded().sigma);
  }
  return 0.0;
}

double tau_tilde(const TailModel& model, double m, double k, double x) {
  const GevParams gk = norming_constants(model.tail(), k);
  return smd_pdf(model, m, x) - gev_pdf(gk, x);
}

EtaTilde eta_tilde(double K, double gamma) {
  if (!(K > 0.0)) throw DomainError("eta requires K_n > 0");
  const double lk = std::log(K);
  const double pre = std::exp((1.0 + gamma) * lk - K);
  const double kg = std::exp(gamma * lk);
  // (K^gamma - 1) / gamma, continuous at gamma = 0
  const double kg1 = std::abs(gamma) < kGammaSwitch ? lk : std::expm1(gamma * lk) / gamma;
  const double s = pre * ((1.0 - K) * (1.0 - kg + gamma * lk) + gamma * (1.0 - kg));
  const double t = pre * (K - 1.0) * kg1;
  const double u = pre * kg * (1.0 + gamma - K);
  return {s, t, u};
}

double zeta_tilde(double N, double k, double gamma, double K, KRegime regime) {
  if (!(N > 0.0 && k > 0.0)) throw DomainError("zeta requires N > 0 and k > 0");
  const double pre = std::pow(N, -0.5) * std::pow(k, -gamma);
  switch (regime) {
    case KRegime::vanishing:
      if (!(K > 0.0)) throw DomainError("zeta requires K_n > 0");
      return pre * std::pow(K, 1.0 + gamma) * std::log(K);
    case KRegime::constant:
      return pre;
    case KRegime::diverging:
      return pre * std::pow(K, 2.0 * (1.0 + gamma)) * std::exp(-K);
  }
  return 0.0;
}

double psi_n(const TailClass& tail, double x) {
  const double g = tail.gamma();
  switch (tail.tag()) {
    case TailTag::hall: {
      const auto& h = tail.hall();
      return h.alpha * (h.alpha + 1) * (h.alpha + 2) * std::pow(h.A, -3.0 * g);
    }
    case TailTag::weibull: {
      const auto& w = tail.weibull();
      return std::pow(w.kappa * w.C, 3.0) * std::pow(x, 3.0 * w.kappa - 3.0);
    }
    case TailTag::bounded: {
      const auto& b = tail.bounded();
      return -b.mu * (b.mu + 1) * (b.mu + 2) * std::pow(b.D, -3.0 * g);
    }
  }
  return 0.0;
}

double xi_n(const TailClass& tail, double x) {
  switch (tail.tag()) {
    case TailTag::hall: {
      const auto& h = tail.hall();
      return h.alpha * (h.alpha + 1) / (x * x);
    }
    case TailTag::weibull: {
      const auto& w = tail.weibull();
      return std::pow(w.kappa * w.C, 2.0) * std::pow(x, 2.0 * w.kappa - 2.0);
    }
    case TailTag::bounded: {
      const auto& b = tail.bounded();
      const double t = b.xstar - x;
      return b.mu * (b.mu + 1) / (t * t);
    }
  }
  return 0.0;
}

double omega_n(const TailClass& tail, double x) {
  switch (tail.tag()) {
    case TailTag::hall: {
      const auto& h = tail.hall();
      return h.alpha * std::pow(x, h.alpha - 1.0) / h.A;
    }
    case TailTag::weibull: {
      const auto& w = tail.weibull();
      return w.kappa * w.C * std::pow(x, w.kappa - 1.0) * std::exp(w.C * std::pow(x, w.kappa));
    }
    case TailTag::bounded: {
      const auto& b = tail.bounded();
      return -b.mu * std::pow(b.xstar - x, b.mu - 1.0) / b.D;
    }
  }
  return 0.0;
}

double phi_n(const TailClass& tail, double m, double x) {
  if (tail.tag() != TailTag::weibull) return m * m;
  const auto& w = tail.weibull();
  const double c = w.kappa * w.C * std::pow(x, w.kappa - 1.0);
  return c * c - 2.0 * m * c + m * m;
}

BiasVariance ne1_bias_var(const TailModel& model, const KernelSpec& kernel1, const KernelSpec& kernel2,
                          double n, double m, double h1, double h2, double x) {
  const TailClass& tail = model.tail();
  const double g = tail.gamma();
  const double M = mn_kn(tail, m, m, x).M;
  const double f = model.pdf(x);
  const KernelMoments k1 = kernel1.moments();
  const KernelMoments k2 = kernel2.moments();
  const double bias = 0.5 * h1 * h1 * std::exp(-M) * std::pow(M, 1.0 + 3.0 * g) * std::pow(m, -3.0 * g) *
                          psi_n(tail, x) * k1.m2 +
                      0.5 * h2 * h2 * M * m * xi_n(tail, x) * f * k2.m2;
  const double variance = m * m / (n * h1) * std::exp(-2.0 * M) * f * k1.r +
                          m * m / n * M * M * f * f * (m / M - 2.0 * h2 * omega_n(tail, x) * k2.s);
  return {bias, variance};
}

BiasVariance ne2_bias_var(const TailModel& model, const KernelSpec& kernel, double n, double m, double h,
                          double x) {
  const KernelMoments km = kernel.moments();
  const double f = model.pdf(x);
  const double bias = 0.5 * m * h * h * f * phi_n(model.tail(), m, x) * km.m2;
  const double n_blocks = n / m;
  const double variance = smd_pdf(model, m, x) * km.r / (n_blocks * h);
  return {bias, variance};
}

namespace {

// Score of one standard GEV observation with respect to (gamma, a, b) at
// (gamma, 1, 0), written in terms of e = -log G(z) for accuracy in both tails.
std::array<double, 3> standard_score(double gamma, double e) {
  const double le = std::log(e);
  double z, t, A_gamma;
  if (std::abs(gamma) < kGammaSwitch) {
    z = -le;
    t = 1.0;
    A_gamma = -0.5 * z * z;
  } else {
    z = std::expm1(-gamma * le) / gamma;
    t = std::exp(-gamma * le);
    const double y = gamma * z;
    const double r = std::abs(y) < 1e-3
                         ? -0.5 + y * (2.0 / 3.0 - y * (0.75 - y * (0.8 - y * 5.0 / 6.0)))
                         : (y / (1.0 + y) - std::log1p(y)) / (y * y);
    A_gamma = z * z * r;
  }
  // exp(-A) = e
  const double dl_dz = -(gamma + 1.0 - e) / t;
  return {-z / t - A_gamma * (1.0 - e), -1.0 - z * dl_dz, -dl_dz};
}

constexpr double kFisherClosedForm = 0.05;

// Prescott-Walden closed form; loses accuracy to cancellation as gamma -> 0.
Matrix3 fisher_closed_form(double x) {
  using boost::math::digamma;
  using boost::math::tgamma;
  const double euler = 0.57721566490153286061;
  const double p = (1 + x) * (1 + x) * tgamma(1 + 2 * x);
  const double g2 = tgamma(2 + x);
  const double q = g2 * (digamma(1 + x) + (1 + x) / x);
  const double c = 1 - euler + 1 / x;
  Matrix3 I{};
  I[0][0] = (std::numbers::pi * std::numbers::pi / 6 + c * c - 2 * q / x + p / (x * x)) / (x * x);
  I[0][1] = -(1 - euler + (1 - g2) / x - q + p / x) / (x * x);
  I[0][2] = -(q - p / x) / x;
  I[1][1] = (1 - 2 * g2 + p) / (x * x);
  I[1][2] = -(p - g2) / x;
  I[2][2] = p;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < i; ++j) I[i][j] = I[j][i];
  return I;
}

}  // namespace

Matrix3 fisher_information(double gamma) {
  if (!(gamma > -0.5)) throw FisherSingular("GEV Fisher information is not finite for gamma <= -1/2");
  if (std::abs(gamma) >= kFisherClosedForm) return fisher_closed_form(gamma);
  boost::math::quadrature::tanh_sinh<double> integrator;
  Matrix3 I{};
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      auto integrand = [&](double w, double wc) {
        // wc is the signed distance to the nearer endpoint of (0, 1)
        const double e = w < 0.5 ? -std::log(w) : -std::log1p(-wc);
        if (!(e > 0.0) || !std::isfinite(e)) return 0.0;
        const auto s = standard_score(gamma, e);
        const double v = s[i] * s[j];
        return std::isfinite(v) ? v : 0.0;
      };
      const double v = integrator.integrate(integrand, 0.0, 1.0, 1e-12);
      I[i][j] = I[j][i] = v;
    }
  }
  return I;
}

Matrix3 invert_spd(const Matrix3& m) {
  const double c00 = m[1][1] * m[2][2] - m[1][2] * m[2][1];
  const double c01 = m[1][2] * m[2][0] - m[1][0] * m[2][2];
  const double c02 = m[1][0] * m[2][1] - m[1][1] * m[2][0];
  const double det = m[0][0] * c00 + m[0][1] * c01 + m[0][2] * c02;
  if (!(m[0][0] > 0.0) || !(m[0][0] * m[1][1] - m[0][1] * m[1][0] > 0.0) || !(det > 0.0) ||
      !std::isfinite(det))
    throw FisherSingular("matrix is not positive definite");
  Matrix3 inv;
  inv[0][0] = c00 / det;
  inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
  inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
  inv[1][0] = c01 / det;
  inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
  inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
  inv[2][0] = c02 / det;
  inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
  inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
  return inv;
}

double pe_asymptotic_sd(double N, double k, double gamma, double K) {
  if (!(N > 0.0 && k > 0.0)) throw DomainError("asymptotic sd requires N > 0 and k > 0");
  const Matrix3 inv = invert_spd(fisher_information(gamma));
  const EtaTilde eta = eta_tilde(K, gamma);
  const std::array<double, 3> v{eta.s, eta.t, eta.u};
  double q = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) q += v[i] * inv[i][j] * v[j];
  return std::pow(N, -0.5) * std::pow(k, -gamma) * std::sqrt(q);
}

}  // namespace maxdens
