#pragma once

#include <array>

#include "maxdens/kernels.hpp"
#include "maxdens/tail_models.hpp"

namespace maxdens {

/// Evaluation point x_n at which M_n = delta exactly (horizon m).
double x_rule(const TailClass& tail, double m, double delta = 1.0);

struct MnKn {
  double M;
  double K;
};

/// Tail-mass scalings M_n (horizon m) and K_n (block size k) at x.
MnKn mn_kn(const TailClass& tail, double m, double k, double x);

/// Second-order bias scale: k m^{-2 beta}, k (ln m)^{-2} or k m^{2 sigma}.
double lambda_n(const TailClass& tail, double k, double m);

/// f_(m)(x) - g_{gamma_k}(x) with the true norming constants at block size k.
double tau_tilde(const TailModel& model, double m, double k, double x);

struct EtaTilde {
  double s;
  double t;
  double u;
};

/// The three sensitivity terms of the parametric estimator at K_n.
EtaTilde eta_tilde(double K, double gamma);

enum class KRegime { vanishing, constant, diverging };

/// Rate term of the parametric estimator for the given regime of (M_n, K_n).
double zeta_tilde(double N, double k, double gamma, double K, KRegime regime);

// Curvature terms of the kernel estimators at x (class branches).
double psi_n(const TailClass& tail, double x);
double xi_n(const TailClass& tail, double x);
double omega_n(const TailClass& tail, double x);
double phi_n(const TailClass& tail, double m, double x);

struct BiasVariance {
  double bias;
  double variance;
  double mse() const { return bias * bias + variance; }
};

/// Leading bias and variance of the plug-in kernel estimator at x.
BiasVariance ne1_bias_var(const TailModel& model, const KernelSpec& kernel1, const KernelSpec& kernel2,
                          double n, double m, double h1, double h2, double x);

/// Leading bias and variance of the block-maxima kernel estimator at x.
BiasVariance ne2_bias_var(const TailModel& model, const KernelSpec& kernel, double n, double m, double h,
                          double x);

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// Fisher information of one GEV observation at (gamma, a=1, b=0), ordered
/// (gamma, a, b), by numerical quadrature. Throws FisherSingular for gamma <= -1/2.
Matrix3 fisher_information(double gamma);

/// Inverse of a symmetric positive-definite 3x3 matrix; throws FisherSingular otherwise.
Matrix3 invert_spd(const Matrix3& m);

/// N^{-1/2} k^{-gamma} sqrt(eta' I0^{-1} eta).
double pe_asymptotic_sd(double N, double k, double gamma, double K);

}  // namespace maxdens
