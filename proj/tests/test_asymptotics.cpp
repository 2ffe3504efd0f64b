#include <doctest.h>

#include "qse/asymptotics.hpp"

#include <random>

using namespace qse;

namespace {

// Single-axis Fisher from the textbook form g g^T / (1 - (n.m)^2).
Eigen::Matrix2d axis_fisher(const BlochVector& m, double theta, double phi) {
  const StatePoint eta{theta, phi, Chart::Theta};
  const Eigen::Vector2d g = eta.tangent().transpose() * m;
  const double c = eta.bloch().dot(m);
  return g * g.transpose() / (1 - c * c);
}

double trace_oracle(double theta, double phi) {
  const double s2 = std::sin(theta) * std::sin(theta);
  return -3.0 / 16 * (35 + 28 * std::cos(2 * theta) + std::cos(4 * theta) - 8 * std::cos(4 * phi) * s2 * s2) /
         (9 + 7 * std::cos(2 * theta) - 2 * std::cos(4 * phi) * s2);
}

}  // namespace

TEST_CASE("planar von Neumann Fisher information is one everywhere") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(-4, 4);
  for (int i = 0; i < 20; ++i) {
    const double t = angle(rng), m = angle(rng);
    CHECK(fisher_2d_von_neumann(t, m) == doctest::Approx(1).epsilon(1e-14));
  }
  CHECK(fisher_2d_von_neumann(0.3, 0.3) == doctest::Approx(1));
  CHECK(fisher_2d_von_neumann(0.3 + std::numbers::pi, 0.3) == doctest::Approx(1));
  CHECK(fisher_2d_von_neumann(1.0, BlochVector(0, 1, 0)) == doctest::Approx(1));
  CHECK_THROWS_AS(fisher_2d_von_neumann(1.0, BlochVector(0, 0, 1)), std::invalid_argument);
}

TEST_CASE("single-axis 3D Fisher matches the rank-one form") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int i = 0; i < 50; ++i) {
    const double t = u(rng), p = 2 * u(rng);
    const BlochVector m = from_angles(u(rng), 2 * u(rng));
    const Eigen::Matrix2d got = fisher_von_neumann_3d(m, {t, p, Chart::Theta});
    CHECK((got - axis_fisher(m, t, p)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("tomography Fisher is additive over the three axes") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 3.09);
  for (int i = 0; i < 100; ++i) {
    const double t = u(rng), p = 2 * u(rng);
    const Eigen::Matrix2d I = fisher_tomography_3d(t, p);
    const Eigen::Matrix2d sum = axis_fisher(BlochVector::UnitX(), t, p) + axis_fisher(BlochVector::UnitY(), t, p) +
                                axis_fisher(BlochVector::UnitZ(), t, p);
    CHECK((I - sum).cwiseAbs().maxCoeff() < 1e-8 * std::max(1.0, sum.cwiseAbs().maxCoeff()));
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(I);
    CHECK(es.eigenvalues().minCoeff() > -1e-12);
    const Eigen::MatrixXd H = hessian_fidelity(StateSpace::Full3D, {t, p, Chart::Theta});
    CHECK((H * I.inverse()).trace() == doctest::Approx(trace_oracle(t, p)).epsilon(1e-9));
  }
}

TEST_CASE("tomography Fisher symmetry under quarter azimuth turns") {
  for (double t : {0.4, 1.1, 2.0})
    for (double p : {0.2, 0.9, 2.5}) {
      const Eigen::Matrix2d a = fisher_tomography_3d(t, p);
      const Eigen::Matrix2d b = fisher_tomography_3d(t, p + std::numbers::pi / 2);
      CHECK((a - b).cwiseAbs().maxCoeff() < 1e-9);
    }
  CHECK_THROWS_AS(fisher_tomography_3d(0.0, 0.3), std::domain_error);
}

TEST_CASE("prior-averaged tomography trace") {
  CHECK(tomography_3d_mean_trace_hi() == doctest::Approx(-13.0 / 18).epsilon(1e-6));
}

TEST_CASE("random-axis Fisher") {
  const Eigen::Matrix2d I = fisher_random_3d();
  CHECK(I(0, 0) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(I(1, 1) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(std::abs(I(0, 1)) < 1e-8);
}

TEST_CASE("fidelity Hessians") {
  const Eigen::MatrixXd h2 = hessian_fidelity(StateSpace::Planar2D, {0.7, 0, Chart::Theta});
  CHECK(h2(0, 0) == -0.5);
  const Eigen::MatrixXd ht = hessian_fidelity(StateSpace::Full3D, {0.7, 1.0, Chart::Theta});
  CHECK(ht(0, 0) == doctest::Approx(-0.5));
  CHECK(ht(1, 1) == doctest::Approx(-std::sin(0.7) * std::sin(0.7) / 2));
  CHECK(ht(0, 1) == 0);
  const Eigen::MatrixXd hv = hessian_fidelity(StateSpace::Full3D, {0.3, 1.0, Chart::CosTheta});
  CHECK(hv(0, 0) == doctest::Approx(-1 / (2 * 0.91)));
  CHECK(hv(1, 1) == doctest::Approx(-0.91 / 2));
  CHECK_THROWS_AS(hessian_fidelity(StateSpace::Full3D, {1.0, 0, Chart::CosTheta}), std::domain_error);
}

TEST_CASE("finite-difference Hessian error falls as h squared") {
  for (Chart chart : {Chart::Theta, Chart::CosTheta}) {
    const StatePoint eta{0.6, 0.4, chart};
    const double e1 = finite_diff_hessian_check(StateSpace::Full3D, eta, 1e-2);
    const double e2 = finite_diff_hessian_check(StateSpace::Full3D, eta, 5e-3);
    CHECK(e1 < 1e-3);
    CHECK(e1 / e2 == doctest::Approx(4).epsilon(0.05));
  }
  CHECK(finite_diff_hessian_check(StateSpace::Planar2D, {0.2, 0, Chart::Theta}, 1e-3) < 1e-6);
  CHECK_THROWS_AS(finite_diff_hessian_check(StateSpace::Planar2D, {}, 1e-8), std::invalid_argument);
}

TEST_CASE("Cramer-Rao fidelities") {
  const Eigen::MatrixXd one = Eigen::MatrixXd::Identity(1, 1);
  for (int N : {1, 10, 1000}) {
    CHECK(cramer_rao_fidelity(one, hessian_fidelity(StateSpace::Planar2D, {}), N) ==
          doctest::Approx(1 - 1.0 / (4 * N)));
    const Eigen::MatrixXd H = hessian_fidelity(StateSpace::Full3D, {0, 0, Chart::CosTheta});
    CHECK(cramer_rao_fidelity(fisher_random_3d(), H, N) == doctest::Approx(1 - 1.0 / N).epsilon(1e-8));
  }
  // Per-copy information is a third of the eight-outcome element's.
  const double mean_trace = tomography_3d_mean_trace_hi();
  for (int N : {30, 300}) CHECK(1 + 3 * mean_trace / (2 * N) == doctest::Approx(1 - 13.0 / (12 * N)).epsilon(1e-8));
  CHECK_THROWS_AS(cramer_rao_fidelity(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Identity(2, 2), 5),
                  std::domain_error);
  CHECK_THROWS_AS(cramer_rao_fidelity(one, Eigen::MatrixXd::Identity(2, 2), 5), std::invalid_argument);
}
