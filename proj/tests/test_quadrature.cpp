#include <doctest.h>

#include "qse/quadrature.hpp"

using namespace qse;

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1") {
  for (int n : {1, 2, 5, 17}) {
    const GaussLegendre gl = gauss_legendre(n);
    CHECK(gl.weights.sum() == doctest::Approx(2));
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double q = 0;
      for (int i = 0; i < n; ++i) q += gl.weights(i) * std::pow(gl.nodes(i), k);
      CHECK(q == doctest::Approx(k % 2 ? 0.0 : 2.0 / (k + 1)).epsilon(1e-13));
    }
  }
  CHECK_THROWS(gauss_legendre(0));
}

TEST_CASE("sphere rules reproduce exact monomial averages") {
  for (StateSpace mode : {StateSpace::Full3D, StateSpace::Planar2D}) {
    const int degree = 8;
    const SphereRule rule = sphere_rule(mode, degree);
    CHECK(rule.weights.sum() == doctest::Approx(1));
    for (int a = 0; a <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b)
        for (int c = 0; a + b + c <= degree; ++c) {
          if (mode == StateSpace::Planar2D && c > 0) continue;
          const double q = integrate(rule, [&](const BlochVector& n) {
            return std::pow(n.x(), a) * std::pow(n.y(), b) * std::pow(n.z(), c);
          });
          CHECK(q == doctest::Approx(sphere_monomial_integral(mode, {a, b, c}).value()).epsilon(1e-13));
        }
  }
}

TEST_CASE("adaptive integration handles kinks") {
  const double v = integrate_adaptive([](double x) { return std::abs(x - 0.3); }, -1, 1);
  CHECK(v == doctest::Approx(0.65 * 1.3 + 0.35 * 0.7).epsilon(1e-11));
  const double w = integrate_adaptive_2d([](double x, double y) { return x * y * y; }, 0, 1, 0, 2);
  CHECK(w == doctest::Approx(4.0 / 3).epsilon(1e-12));
}
