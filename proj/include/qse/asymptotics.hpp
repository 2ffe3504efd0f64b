// asymptotics.hpp
// Fisher information of single-copy measurements, fidelity Hessians and the
// large-N fidelity they imply through the Cramer-Rao bound.

#pragma once

#include "qse/core.hpp"

namespace qse {

/// Coordinates of the state: polar angle theta, or v = cos(theta), plus the
/// azimuth phi. Planar states use theta alone.
enum class Chart { Theta, CosTheta };

struct StatePoint {
  double first = 0;  // theta or v
  double phi = 0;
  Chart chart = Chart::Theta;

  BlochVector bloch() const;
  /// Columns d n / d(first), d n / d(phi).
  Eigen::Matrix<double, 3, 2> tangent() const;
};

/// Fisher information of a measurement with outcome probabilities p_k(eta)
/// and gradients dp_k: sum_k dp dp^T / p. Terms with p below 1e-14 are
/// dropped.
Eigen::MatrixXd fisher_from_outcomes(const std::vector<double>& p, const std::vector<Eigen::VectorXd>& dp);

/// Equatorial state at angle theta measured along the equatorial axis at
/// theta_m. Computed from the outcome amplitudes cos, sin of
/// (theta - theta_m)/2, which stays regular where one outcome is certain.
double fisher_2d_von_neumann(double theta, double theta_m);
double fisher_2d_von_neumann(double theta, const BlochVector& axis);

/// 2x2 Fisher matrix of one von Neumann measurement along `axis`.
Eigen::Matrix2d fisher_von_neumann_3d(const BlochVector& axis, const StatePoint& eta);

/// Eight-outcome measurement: one copy each along x, y and z.
Eigen::Matrix2d fisher_tomography_3d(double theta, double phi);

/// Isotropic random axis, evaluated at v = 0, phi = 0 in the (v, phi) chart
/// by adaptive integration over the axis direction.
Eigen::Matrix2d fisher_random_3d(double tol = 1e-8);

/// Hessian of (1 + n(eta_hat).n(eta))/2 in eta_hat at eta_hat = eta.
Eigen::MatrixXd hessian_fidelity(StateSpace mode, const StatePoint& eta);

/// 1 + tr(H I^-1)/(2N), with I the Fisher information per copy.
double cramer_rao_fidelity(const Eigen::MatrixXd& fisher_per_copy, const Eigen::MatrixXd& hessian, int N);

/// Largest entry of |central-difference Hessian - closed form| with step h.
double finite_diff_hessian_check(StateSpace mode, const StatePoint& eta, double h);

/// Prior average of tr(H I^-1) for the eight-outcome tomography measurement.
double tomography_3d_mean_trace_hi(double tol = 1e-8);

}  // namespace qse
