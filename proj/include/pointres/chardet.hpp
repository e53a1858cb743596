#pragma once

#include <Eigen/Dense>

#include "pointres/geometry.hpp"

namespace pointres {

/// Gamma_Y(z) evaluated at one point; symmetric by construction.
struct GammaEval {
  Eigen::MatrixXcd matrix;
  Complex z;
};

struct KernelValue {
  Complex value;
  Complex z;
  Vec3 x;
  Vec3 xp;
};

/// Free resolvent kernel exp(i z |v|) / (4 pi |v|). Throws ZeroSeparation
/// when |v| = 0.
Complex free_green(Complex z, const Vec3& v);

/// Same kernel as a function of the separation r > 0.
Complex free_green_r(Complex z, double r);

/// Entries (alpha - i z / 4 pi) delta_jj' - G_z(Y_j - Y_j'), with the
/// diagonal Green term dropped.
GammaEval gamma_matrix(const Configuration& c, Complex z);

/// Entrywise derivative of gamma_matrix with respect to z.
Eigen::MatrixXcd gamma_matrix_derivative(const Configuration& c, Complex z);

Complex det_gamma(const Configuration& c, Complex z);

/// D_Y(z) = (-4 pi)^N det Gamma_Y(z); D = 1 for the empty configuration.
Complex modified_determinant(const Configuration& c, Complex z);

/// d/dz det Gamma_Y(z). Uses det * tr(Gamma^-1 Gamma') when the LU pivots
/// are well separated from zero, otherwise a cofactor sum (N <= 8) or the
/// linear coefficient of t -> det(Gamma + t Gamma') extracted by a DFT.
Complex det_gamma_derivative(const Configuration& c, Complex z);

/// Same quantity, always through the cofactor expansion. N <= 8.
Complex det_gamma_derivative_cofactor(const Configuration& c, Complex z);

/// Log-domain evaluation for callers that must survive |det| outside the
/// double range (deep in the lower half-plane). log_det = ln|det| + i arg,
/// with arg not reduced modulo 2 pi. log_derivative = det'/det, computed
/// by the trace identity; it is meaningless when `singular` is set.
struct LogDetEval {
  Complex log_det;
  Complex log_derivative;
  bool singular = false;
};
LogDetEval log_det_gamma(const Configuration& c, Complex z);

/// Scale used by the singularity test: max(|alpha| + |z|/4pi, max |G~|).
double gamma_scale(const Configuration& c, Complex z);

/// Relative threshold for SingularGamma: |det| < kSingularTol * scale^N.
inline constexpr double kSingularTol = 1e-10;

/// Green function of H_Y at (x, xp), Krein-type formula.
KernelValue resolvent_kernel(const Configuration& c, Complex z, const Vec3& x, const Vec3& xp);

/// Width 4 |Im k Re k| of a resonance k.
double resonance_width(Complex k);

}  // namespace pointres
