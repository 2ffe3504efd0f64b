#include "qse/collective.hpp"

#include "qse/quadrature.hpp"

#include <complex>

namespace qse {

namespace {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

void require_copies(int N) {
  if (N < 1) throw std::invalid_argument("copy count must be positive");
}

double max_identity_defect(const ComplexMatrix& m) {
  return (m - ComplexMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

// Amplitudes of |n>^N in the |J, m> basis, index k = J + m counts spin-up.
Eigen::VectorXcd coherent_amplitudes(int N, const BlochVector& n) {
  const double theta = std::acos(std::clamp(n.z(), -1.0, 1.0));
  const double phi = std::atan2(n.y(), n.x());
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Eigen::VectorXcd a(N + 1);
  for (int k = 0; k <= N; ++k)
    a(k) = std::sqrt(binomial(N, k)) * std::pow(c, k) * std::pow(s, N - k) *
           std::polar(1.0, (N - k) * phi);
  return a;
}

}  // namespace

double delta_2d_max(int N) {
  require_copies(N);
  double sum = 0;
  if (N <= 60) {
    for (int k = 0; k < N; ++k) sum += std::sqrt(binomial(N, k) * binomial(N, k + 1));
    return std::ldexp(sum, -N);
  }
  const double log2N = N * std::log(2.0);
  for (int k = 0; k < N; ++k)
    sum += std::exp(0.5 * (log_binomial(N, k) + log_binomial(N, k + 1)) - log2N);
  return sum;
}

Rational fidelity_3d_collective(int N) {
  require_copies(N);
  return {N + 1, N + 2};
}

CollectiveBound collective_bound_2d(int N) {
  const double delta = delta_2d_max(N);
  return {N, N / 2.0, N + 1, delta, (1 + delta) / 2};
}

CollectiveBound collective_bound_3d(int N) {
  const double F = fidelity_3d_collective(N).value();
  return {N, N / 2.0, N + 1, 2 * F - 1, F};
}

double phase_fidelity_general_fiducial(int d) {
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  return (1 + std::cos(std::numbers::pi / (d + 1))) / 2;
}

double rotation_amplitude_sq(HalfInteger J, HalfInteger m, const BlochVector& n) {
  if (J.twice < 0) throw std::invalid_argument("J must be non-negative");
  if (std::abs(m.twice) > J.twice || (J.twice - m.twice) % 2 != 0)
    throw std::invalid_argument("m must lie in -J..J in integer steps");
  require_unit(n, "direction");
  const int up = (J.twice + m.twice) / 2;
  const int down = (J.twice - m.twice) / 2;
  const double c2 = (1 + n.z()) / 2, s2 = (1 - n.z()) / 2;
  return binomial(J.twice, up) * std::pow(c2, up) * std::pow(s2, down);
}

PovmReport verify_povm_2d(const CovariantPovmSpec2D& spec) {
  require_copies(spec.N);
  const int d = spec.N + 1;
  // Outcome phases and weights; for the continuous POVM a uniform rule with
  // 2d points integrates every e^{i(m-n)phi} exactly.
  const int K = spec.finite_outcomes ? *spec.finite_outcomes : 2 * d;
  if (K < 1) throw std::invalid_argument("outcome count must be positive");
  const double weight = 1.0 / K;

  auto element = [&](double phi) {
    ComplexMatrix O(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) O(a, b) = std::polar(weight, (a - b) * phi);
    return O;
  };

  const Eigen::VectorXcd fiducial = coherent_amplitudes(spec.N, BlochVector::UnitX());
  // tr[rho(theta) O] is a trigonometric polynomial of degree <= N, so V is
  // exact on N + 2 equally spaced angles.
  const int T = spec.N + 2;

  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  PovmReport report;
  for (int k = 0; k < K; ++k) {
    const ComplexMatrix O = element(2 * std::numbers::pi * k / K);
    total += O;
    Complex v = 0;
    for (int t = 0; t < T; ++t) {
      const double theta = 2 * std::numbers::pi * t / T;
      Eigen::VectorXcd psi(d);
      for (int a = 0; a < d; ++a) psi(a) = fiducial(a) * std::polar(1.0, a * theta);
      const double prob = std::real(psi.dot(O * psi));
      v += std::polar(prob / T, theta);
    }
    report.delta += std::abs(v);
  }
  report.completeness_defect = max_identity_defect(total);
  return report;
}

PovmReport verify_povm_3d(int N, int quadrature_degree) {
  require_copies(N);
  if (N > 20) throw std::invalid_argument("verify_povm_3d supports N <= 20");
  const int d = N + 1;
  const SphereRule rule = sphere_rule(StateSpace::Full3D, quadrature_degree > 0 ? quadrature_degree : N + 1);

  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < rule.size(); ++i) {
    const Eigen::VectorXcd a = coherent_amplitudes(N, rule.nodes.col(i));
    total += (rule.weights(i) * d) * a * a.adjoint();
  }

  // |V(m)| does not depend on m; evaluate it for the element along +z.
  const Eigen::VectorXcd top = coherent_amplitudes(N, BlochVector::UnitZ());
  BlochVector v = BlochVector::Zero();
  for (Eigen::Index i = 0; i < rule.size(); ++i) {
    const BlochVector n = rule.nodes.col(i);
    const double overlap = std::norm(coherent_amplitudes(N, n).dot(top));
    v += rule.weights(i) * d * overlap * n;
  }
  return {max_identity_defect(total), v.norm()};
}

}  // namespace qse
