#include "qse/asymptotics.hpp"

#include "qse/quadrature.hpp"

namespace qse {

BlochVector StatePoint::bloch() const {
  const double c = chart == Chart::Theta ? std::cos(first) : first;
  const double s = chart == Chart::Theta ? std::sin(first) : std::sqrt(std::max(0.0, 1 - first * first));
  return {s * std::cos(phi), s * std::sin(phi), c};
}

Eigen::Matrix<double, 3, 2> StatePoint::tangent() const {
  Eigen::Matrix<double, 3, 2> t;
  const double cp = std::cos(phi), sp = std::sin(phi);
  if (chart == Chart::Theta) {
    const double c = std::cos(first), s = std::sin(first);
    t.col(0) << c * cp, c * sp, -s;
    t.col(1) << -s * sp, s * cp, 0;
  } else {
    const double s = std::sqrt(1 - first * first);
    if (s == 0) throw std::domain_error("v chart is singular at the poles");
    t.col(0) << -first / s * cp, -first / s * sp, 1;
    t.col(1) << -s * sp, s * cp, 0;
  }
  return t;
}

Eigen::MatrixXd fisher_from_outcomes(const std::vector<double>& p, const std::vector<Eigen::VectorXd>& dp) {
  if (p.size() != dp.size() || p.empty()) throw std::invalid_argument("outcome lists differ in size");
  const auto dim = dp.front().size();
  Eigen::MatrixXd I = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t k = 0; k < p.size(); ++k)
    if (p[k] > 1e-14) I += dp[k] * dp[k].transpose() / p[k];
  return I;
}

double fisher_2d_von_neumann(double theta, double theta_m) {
  const double h = (theta - theta_m) / 2;
  // p = a^2 gives dp^2/p = 4 (da)^2 for each amplitude a.
  const double da_plus = -std::sin(h) / 2, da_minus = std::cos(h) / 2;
  return 4 * (da_plus * da_plus + da_minus * da_minus);
}

double fisher_2d_von_neumann(double theta, const BlochVector& axis) {
  require_unit(axis, "measurement axis");
  require_in_mode(axis, StateSpace::Planar2D, "measurement axis");
  return fisher_2d_von_neumann(theta, std::atan2(axis.y(), axis.x()));
}

Eigen::Matrix2d fisher_von_neumann_3d(const BlochVector& axis, const StatePoint& eta) {
  require_unit(axis, "measurement axis");
  const BlochVector n = eta.bloch();
  const Eigen::Vector2d g = eta.tangent().transpose() * axis;
  std::vector<double> p{(1 + n.dot(axis)) / 2, (1 - n.dot(axis)) / 2};
  std::vector<Eigen::VectorXd> dp{g / 2, -g / 2};
  return fisher_from_outcomes(p, dp);
}

Eigen::Matrix2d fisher_tomography_3d(double theta, double phi) {
  if (std::abs(std::sin(theta)) < 1e-12) throw std::domain_error("theta chart is singular at the poles");
  const StatePoint eta{theta, phi, Chart::Theta};
  const BlochVector n = eta.bloch();
  const Eigen::Matrix<double, 3, 2> T = eta.tangent();
  std::vector<double> p;
  std::vector<Eigen::VectorXd> dp;
  for (int outcome = 0; outcome < 8; ++outcome) {
    double prob = 1;
    Eigen::Vector2d grad = Eigen::Vector2d::Zero();
    for (int j = 0; j < 3; ++j) {
      const double s = (outcome >> j) & 1 ? -1.0 : 1.0;
      const double pj = (1 + s * n(j)) / 2;
      const Eigen::Vector2d dj = s * T.row(j).transpose() / 2;
      grad = grad * pj + prob * dj;
      prob *= pj;
    }
    p.push_back(prob);
    dp.push_back(grad);
  }
  return fisher_from_outcomes(p, dp);
}

Eigen::Matrix2d fisher_random_3d(double tol) {
  const StatePoint eta{0, 0, Chart::CosTheta};
  auto entry = [&](int i, int j) {
    auto f = [&](double u, double varphi) {
      const double s = std::sqrt(1 - u * u);
      const BlochVector m(s * std::cos(varphi), s * std::sin(varphi), u);
      return fisher_von_neumann_3d(m, eta)(i, j) / (4 * std::numbers::pi);
    };
    // Break at the kinks: u = 0 and every quarter turn in the azimuth.
    double total = 0;
    for (double u0 : {-1.0, 0.0})
      for (int q = 0; q < 4; ++q)
        total += integrate_adaptive_2d(f, u0, u0 + 1, q * std::numbers::pi / 2, (q + 1) * std::numbers::pi / 2,
                                       tol / 8);
    return total;
  };
  Eigen::Matrix2d I;
  I(0, 0) = entry(0, 0);
  I(1, 1) = entry(1, 1);
  I(0, 1) = I(1, 0) = entry(0, 1);
  return I;
}

Eigen::MatrixXd hessian_fidelity(StateSpace mode, const StatePoint& eta) {
  if (mode == StateSpace::Planar2D) return Eigen::MatrixXd::Constant(1, 1, -0.5);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2, 2);
  if (eta.chart == Chart::Theta) {
    const double s = std::sin(eta.first);
    H(0, 0) = -0.5;
    H(1, 1) = -s * s / 2;
  } else {
    const double w = 1 - eta.first * eta.first;
    if (w <= 0) throw std::domain_error("v chart is singular at the poles");
    H(0, 0) = -1 / (2 * w);
    H(1, 1) = -w / 2;
  }
  return H;
}

double cramer_rao_fidelity(const Eigen::MatrixXd& fisher, const Eigen::MatrixXd& hessian, int N) {
  if (N < 1) throw std::invalid_argument("copy count must be positive");
  if (fisher.rows() != hessian.rows() || fisher.cols() != hessian.cols())
    throw std::invalid_argument("Fisher and Hessian dimensions differ");
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(fisher);
  const double scale = std::max(1.0, fisher.cwiseAbs().maxCoeff());
  if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-12 * std::pow(scale, fisher.rows()))
    throw std::domain_error("singular Fisher information: parameter not identifiable");
  return 1 + (hessian * lu.inverse()).trace() / (2.0 * N);
}

double finite_diff_hessian_check(StateSpace mode, const StatePoint& eta, double h) {
  if (!(h >= 1e-6 && h <= 1e-2)) throw std::invalid_argument("step must lie in [1e-6, 1e-2]");
  const BlochVector n = eta.bloch();
  auto f = [&](double a, double b) {
    StatePoint q = eta;
    q.first += a;
    q.phi += b;
    if (mode == StateSpace::Planar2D) return (1 + std::cos(a)) / 2;
    return (1 + q.bloch().dot(n)) / 2;
  };
  const Eigen::MatrixXd exact = hessian_fidelity(mode, eta);
  Eigen::MatrixXd fd(exact.rows(), exact.cols());
  const double f0 = f(0, 0);
  fd(0, 0) = (f(h, 0) - 2 * f0 + f(-h, 0)) / (h * h);
  if (mode == StateSpace::Full3D) {
    fd(1, 1) = (f(0, h) - 2 * f0 + f(0, -h)) / (h * h);
    fd(0, 1) = fd(1, 0) = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h * h);
  }
  return (fd - exact).cwiseAbs().maxCoeff();
}

double tomography_3d_mean_trace_hi(double tol) {
  // The integrand is symmetric under reflections through the coordinate
  // planes; integrate one octant in (u, phi) with kinks on its edges.
  auto f = [](double u, double phi) {
    const double theta = std::acos(u);
    const Eigen::Matrix2d I = fisher_tomography_3d(theta, phi);
    const Eigen::MatrixXd H = hessian_fidelity(StateSpace::Full3D, {theta, phi, Chart::Theta});
    return (H * I.inverse()).trace();
  };
  const double octant = integrate_adaptive_2d(f, 0, 1, 0, std::numbers::pi / 2, tol);
  return octant * 8 / (4 * std::numbers::pi);
}

}  // namespace qse
