#include <catch_amalgamated.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

#include "maxdens/asymptotics.hpp"
#include "maxdens/errors.hpp"
#include "maxdens/gev.hpp"

using namespace maxdens;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const TailClass kHall(HallTail{1, 1, 1, 0});
const TailClass kBounded(BoundedTail{-2, -1, 1, 1, 1});
const TailClass kWeibull(WeibullTail{1, 1});

// Upper triangles (gamma,gamma) (gamma,a) (gamma,b) (a,a) (a,b) (b,b) of the
// per-observation information, evaluated at 30 digits; the entries away from
// the end-point singularity were cross-checked against quadrature of squared
// numerical scores.
struct FisherReference {
  double gamma;
  std::array<double, 6> upper;
};
constexpr FisherReference kFisherReference[] = {
    {-0.45, {36.5830823502, 17.728060741, 8.36834979564, 10.3708611518, 4.41992829121, 2.87783607885}},
    {-0.3, {7.42323646104, 3.06699382578, 1.31425407421, 2.99578567483, 0.594198145293, 1.08689817644}},
    {0.25, {1.65038537373, -0.358084958211, 0.526433440268, 1.8995740541, -1.0069058988, 1.38472957102}},
    {0.8, {1.64983025841, -1.74571957625, 1.92511209801, 3.56094061747, -3.69436597868, 4.63198357071}},
};

}  // namespace

TEST_CASE("tail-mass scalings", "[asymptotics]") {
  CHECK_THAT(mn_kn(kHall, 4, 4, 8).M, WithinAbs(0.5, 1e-15));
  CHECK_THAT(mn_kn(kBounded, 4, 4, 0.0).M, WithinAbs(4.0, 1e-15));
  CHECK_THAT(mn_kn(kHall, 16, 4, 8).K, WithinAbs(0.5, 1e-15));
  for (const auto& tail : {kHall, kBounded, kWeibull, TailClass(WeibullTail{2.5, 0.7}), TailClass(HallTail{0.5, 1, 3, 1})})
    for (double m : {4.0, 64.0, 4096.0})
      for (double delta : {0.5, 1.0, 3.0}) CHECK_THAT(mn_kn(tail, m, m, x_rule(tail, m, delta)).M, WithinRel(delta, 1e-10));
  // at k = m the Weibull K_n is pinned to 1 by x_rule
  const double x = x_rule(TailClass(WeibullTail{2, 1}), 100, 1.0);
  CHECK_THAT(mn_kn(TailClass(WeibullTail{2, 1}), 100, 100, x).K, WithinRel(1.0, 1e-10));
}

TEST_CASE("second-order scale", "[asymptotics]") {
  CHECK_THAT(lambda_n(kHall, 100, 100), WithinAbs(0.01, 1e-15));
  CHECK_THAT(lambda_n(kBounded, 100, 100), WithinAbs(0.01, 1e-15));
  CHECK_THAT(lambda_n(kWeibull, 100, std::exp(2.0)), WithinAbs(25.0, 1e-12));
}

TEST_CASE("parametric sensitivity terms", "[asymptotics]") {
  for (double g : {-0.4, 0.0, 0.5, 1.0, 2.0}) {
    const auto e = eta_tilde(1.0, g);
    CHECK(e.s == 0.0);
    CHECK(e.t == 0.0);
  }
  CHECK_THAT(eta_tilde(1.0, 1.0).u, WithinAbs(std::exp(-1.0), 1e-15));
  for (double K : {0.1, 0.7, 2.0, 5.0}) {
    const auto a = eta_tilde(K, 0.0);
    const auto b = eta_tilde(K, 1e-8);
    CHECK_THAT(b.s, WithinAbs(a.s, 1e-6));
    CHECK_THAT(b.t, WithinAbs(a.t, 1e-6));
    CHECK_THAT(b.u, WithinAbs(a.u, 1e-6));
    CHECK_THAT(a.t, WithinAbs(K * std::exp(-K) * (K - 1) * std::log(K), 1e-15));
  }
  CHECK_THROWS_AS(eta_tilde(0.0, 0.5), DomainError);
}

TEST_CASE("parametric rate term", "[asymptotics]") {
  CHECK_THAT(zeta_tilde(100, 100, 1.0, 0.1, KRegime::vanishing), WithinRel(0.1 * 0.01 * (0.01 * std::log(0.1)), 1e-14));
  CHECK_THAT(zeta_tilde(100, 100, 1.0, 0.1, KRegime::constant), WithinRel(1e-3, 1e-14));
  CHECK_THAT(zeta_tilde(4, 1, 0.0, 3.0, KRegime::diverging), WithinRel(0.5 * 9.0 * std::exp(-3.0), 1e-14));
}

TEST_CASE("curvature terms", "[asymptotics]") {
  CHECK(phi_n(kHall, 7, 3.0) == 49.0);
  CHECK(phi_n(kBounded, 7, 0.5) == 49.0);
  for (double m : {2.0, 10.0, 100.0}) CHECK_THAT(phi_n(kWeibull, m, 1.7), WithinAbs((m - 1) * (m - 1), 1e-12));
  CHECK_THAT(psi_n(kHall, 5.0), WithinAbs(6.0, 1e-15));
  CHECK_THAT(xi_n(kHall, 2.0), WithinAbs(0.5, 1e-15));
  CHECK_THAT(omega_n(kHall, 3.0), WithinAbs(1.0, 1e-15));
  CHECK_THAT(omega_n(kWeibull, 2.0), WithinRel(std::exp(2.0), 1e-15));
  CHECK_THAT(xi_n(kBounded, 0.0), WithinAbs(2.0, 1e-15));
}

TEST_CASE("kernel estimator bias and variance", "[asymptotics]") {
  const auto model = TailModel::pareto(1);
  const auto g = KernelSpec::gaussian();
  const double x = x_rule(model.tail(), 16);
  CHECK(ne1_bias_var(model, g, g, 1024, 16, 0.0, 0.0, x).bias == 0.0);
  CHECK(ne2_bias_var(model, g, 1024, 16, 0.0, x).bias == 0.0);
  const auto a = ne1_bias_var(model, g, g, 1024, 16, 0.5, 0.5, x);
  const auto b = ne1_bias_var(model, g, g, 1024, 16, 1.0, 0.5, x);
  CHECK_THAT(b.bias - a.bias, WithinRel(3.0 * (a.bias - ne1_bias_var(model, g, g, 1024, 16, 0.0, 0.5, x).bias), 1e-12));
  CHECK(a.variance > 0.0);
  CHECK_THAT(a.mse(), WithinRel(a.bias * a.bias + a.variance, 1e-15));
}

TEST_CASE("GEV Fisher information", "[asymptotics]") {
  const double ge = 0.57721566490153286;
  const auto I0 = fisher_information(0.0);
  CHECK_THAT(I0[2][2], WithinAbs(1.0, 1e-8));
  CHECK_THAT(I0[1][1], WithinAbs((1 - ge) * (1 - ge) + std::numbers::pi * std::numbers::pi / 6, 1e-8));
  CHECK_THAT(I0[1][2], WithinAbs(-(1 - ge), 1e-8));
  for (const auto& ref : kFisherReference) {
    const auto I = fisher_information(ref.gamma);
    INFO("gamma=" << ref.gamma);
    int k = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j, ++k) {
        CHECK_THAT(I[i][j], WithinRel(ref.upper[k], 1e-8));
        CHECK(I[i][j] == I[j][i]);
      }
    const auto inv = invert_spd(I);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int l = 0; l < 3; ++l) s += I[i][l] * inv[l][j];
        CHECK_THAT(s, WithinAbs(i == j ? 1.0 : 0.0, 1e-10));
      }
  }
  // the small-shape evaluation joins the large-shape one continuously
  for (double g : {-0.05, 0.05}) {
    const auto lo = fisher_information(g * (1 - 1e-9));
    const auto hi = fisher_information(g * (1 + 1e-9));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK_THAT(lo[i][j], WithinRel(hi[i][j], 1e-8));
  }
  CHECK_THROWS_AS(fisher_information(-0.5), FisherSingular);
  CHECK_THROWS_AS(invert_spd(Matrix3{}), FisherSingular);
}

TEST_CASE("parametric asymptotic sd at K = 1", "[asymptotics]") {
  for (double g : {0.0, 0.5}) {
    const auto inv = invert_spd(fisher_information(g));
    const double u = eta_tilde(1.0, g).u;
    CHECK_THAT(pe_asymptotic_sd(64, 16, g, 1.0), WithinRel(std::pow(64.0, -0.5) * std::pow(16.0, -g) * std::abs(u) * std::sqrt(inv[2][2]), 1e-12));
  }
}

TEST_CASE("GEV approximation error of the maximum density", "[asymptotics]") {
  // relative error at x_n decays polynomially in m for a Hall tail and
  // logarithmically for a Weibull tail with kappa != 1
  auto rel = [](const TailModel& model, double m, double delta) {
    const double x = x_rule(model.tail(), m, delta);
    return std::abs(tau_tilde(model, m, m, x)) / smd_pdf(model, m, x);
  };
  auto slope = [&](const TailModel& model, double delta) {
    return std::log(rel(model, 4096, delta) / rel(model, 1024, delta)) / std::log(4.0);
  };
  const auto t3 = TailModel::student_t(3);
  CHECK(slope(t3, 1.0) < -0.5);
  const auto w2 = TailModel::weibull(2);
  double prev = 1.0;
  for (double m = 4; m <= 4096; m *= 4) {
    const double r = rel(w2, m, 2.0);
    CHECK(r < prev);
    prev = r;
  }
  CHECK(slope(w2, 2.0) > -0.2);
  CHECK(slope(w2, 2.0) < 0.0);
  // Pareto draws have B = 0 and the exact maximum law converges at rate 1/m
  CHECK_THAT(slope(TailModel::pareto(1), 1.0), WithinAbs(-1.0, 0.05));
}
