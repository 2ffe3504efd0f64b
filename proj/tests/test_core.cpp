#include <doctest.h>

#include "qse/core.hpp"
#include "qse/posterior.hpp"
#include "qse/rng.hpp"

#include <random>

using namespace qse;

TEST_CASE("fidelity of aligned, orthogonal and opposite guesses") {
  const BlochVector z = BlochVector::UnitZ();
  CHECK(fidelity(z, z) == doctest::Approx(1.0));
  CHECK(fidelity(z, BlochVector(BlochVector::UnitX())) == doctest::Approx(0.5));
  CHECK(fidelity(z, BlochVector(-z)) == doctest::Approx(0.0));
  CHECK_THROWS_AS(fidelity(z, BlochVector(2, 0, 0)), std::invalid_argument);
}

TEST_CASE("optimal guess normalizes and flags vanishing V") {
  const Guess g = optimal_guess(BlochVector(0, 3, 4));
  CHECK(g.axis.isApprox(BlochVector(0, 0.6, 0.8)));
  CHECK_FALSE(g.degenerate);
  const Guess z = optimal_guess(BlochVector::Zero());
  CHECK(z.degenerate);
  CHECK(z.axis == BlochVector::UnitZ());
  CHECK(optimal_guess(BlochVector::Zero(), StateSpace::Planar2D).axis == BlochVector::UnitX());
}

TEST_CASE("rational arithmetic stays reduced") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(1, -3) == Rational(-1, 3));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK((Rational(2, 3) * Rational(9, 4)).str() == "3/2");
  CHECK((Rational(1, 2) - Rational(1, 2)).str() == "0");
  CHECK_THROWS(Rational(1, 0));
  CHECK_THROWS_AS(Rational(INT64_MAX / 2, 1) * Rational(4, 1), std::overflow_error);
}

// Independent route: brute-force the prior average on a fine midpoint grid.
double grid_average(StateSpace mode, Exponents e) {
  auto mono = [&](const BlochVector& n) {
    return std::pow(n.x(), e.x) * std::pow(n.y(), e.y) * std::pow(n.z(), e.z);
  };
  const int M = 2000;
  double sum = 0;
  if (mode == StateSpace::Planar2D) {
    for (int i = 0; i < M; ++i) sum += mono(from_angles(std::numbers::pi / 2, 2 * std::numbers::pi * (i + 0.5) / M));
    return sum / M;
  }
  for (int i = 0; i < M; ++i) {
    const double u = -1 + 2 * (i + 0.5) / M;
    for (int j = 0; j < 200; ++j) sum += mono(from_angles(std::acos(u), 2 * std::numbers::pi * (j + 0.5) / 200));
  }
  return sum / (M * 200.0);
}

TEST_CASE("sphere monomial integrals") {
  CHECK(sphere_monomial_integral(StateSpace::Full3D, {2, 0, 0}) == Rational(1, 3));
  CHECK(sphere_monomial_integral(StateSpace::Full3D, {1, 0, 0}) == Rational(0));
  CHECK(sphere_monomial_integral(StateSpace::Planar2D, {2, 0, 0}) == Rational(1, 2));
  CHECK(sphere_monomial_integral(StateSpace::Full3D, {2, 2, 2}) == Rational(1, 105));
  CHECK_THROWS(sphere_monomial_integral(StateSpace::Planar2D, {0, 0, 2}));
  for (Exponents e : {Exponents{4, 0, 0}, Exponents{2, 2, 0}, Exponents{2, 0, 4}, Exponents{0, 6, 2}})
    CHECK(sphere_monomial_integral(StateSpace::Full3D, e).value() ==
          doctest::Approx(grid_average(StateSpace::Full3D, e)).epsilon(1e-5));
  for (Exponents e : {Exponents{4, 0, 0}, Exponents{2, 4, 0}, Exponents{6, 2, 0}})
    CHECK(sphere_monomial_integral(StateSpace::Planar2D, e).value() ==
          doctest::Approx(grid_average(StateSpace::Planar2D, e)).epsilon(1e-9));
}

TEST_CASE("binomials: exact below the cutoff, log-gamma above") {
  CHECK(binomial(10, 3) == 120);
  CHECK(binomial(60, 30) == 118264581564861424.0);
  CHECK(binomial(5, 6) == 0);
  CHECK(binomial(100, 50) == doctest::Approx(1.0089134454556419e29).epsilon(1e-12));
}

TEST_CASE("prior samples are unit and in mode") {
  CounterRng rng(7, StreamId::Test, 0);
  BlochVector mean = BlochVector::Zero();
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const BlochVector s = sample_prior(StateSpace::Full3D, rng);
    CHECK(std::abs(s.norm() - 1) < 1e-12);
    mean += s;
  }
  CHECK((mean / n).norm() < 0.03);
  const BlochVector p = sample_prior(StateSpace::Planar2D, rng);
  CHECK(p.z() == 0.0);
}

TEST_CASE("counter streams are reproducible and distinct") {
  CounterRng a(1, StreamId::Test, 5), b(1, StreamId::Test, 5), c(1, StreamId::Test, 6);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  CHECK(CounterRng(2, StreamId::Test, 5)() != x);
}

TEST_CASE("outcome strings print most recent first") {
  OutcomeString s{{0, 1, 1}};
  CHECK(s.str() == "110");
  CHECK(OutcomeString::parse("110") == s);
  CHECK(OutcomeString::from_code(s.code(), 3) == s);
  CHECK_THROWS(OutcomeString::parse("1a"));
}

TEST_CASE("posterior summary of the empty record is the prior") {
  const PosteriorSummary s = posterior_summary({}, StateSpace::Full3D);
  CHECK(s.p == doctest::Approx(1));
  CHECK(s.V.norm() < 1e-14);
  CHECK((s.A - Matrix3::Identity() / 3).norm() < 1e-14);
  const PosteriorSummary p = posterior_summary({}, StateSpace::Planar2D);
  CHECK((p.A - Vec3<double>(0.5, 0.5, 0).asDiagonal().toDenseMatrix()).norm() < 1e-14);
}

TEST_CASE("posterior after one x outcome") {
  const SignedAxis rec[] = {{BlochVector::UnitX(), 1}};
  const PosteriorSummary s = posterior_summary(rec, StateSpace::Full3D);
  CHECK(s.p == doctest::Approx(0.5));
  CHECK((s.V - BlochVector::UnitX() / 6).norm() < 1e-14);
  CHECK((s.A - Matrix3::Identity() / 6).norm() < 1e-14);
  CHECK(s.A.trace() == doctest::Approx(s.p));
}

TEST_CASE("posterior moments match a Monte Carlo estimate") {
  const SignedAxis rec[] = {{BlochVector::UnitX(), 1},
                            {BlochVector(0, 0.6, 0.8), -1},
                            {BlochVector::UnitZ(), 1}};
  const PosteriorSummary s = posterior_summary(rec, StateSpace::Full3D);
  CounterRng rng(3, StreamId::Test, 1);
  const int n = 400000;
  double p = 0;
  BlochVector V = BlochVector::Zero();
  for (int i = 0; i < n; ++i) {
    const BlochVector x = sample_prior(StateSpace::Full3D, rng);
    double w = 1;
    for (const auto& r : rec) w *= (1 + r.sign * x.dot(r.axis)) / 2;
    p += w;
    V += w * x;
  }
  CHECK(s.p == doctest::Approx(p / n).epsilon(0.01));
  CHECK((s.V - V / n).norm() < 2e-3);
  CHECK_THROWS(posterior_summary(std::vector<SignedAxis>{{BlochVector(1, 1, 0), 1}}, StateSpace::Full3D));
}
