#include <doctest.h>

#include "qse/nelder_mead.hpp"
#include "qse/posterior.hpp"
#include "qse/rng.hpp"
#include "qse/sphere_opt.hpp"

#include <array>
#include <random>
#include <vector>

using namespace qse;

namespace {

std::vector<NormTerm> greedy_terms(const BlochVector& V, const Matrix3& A) {
  return {{V, A}, {V, -A}};
}

// Fibonacci-lattice brute force over the sphere.
double brute_force_max(std::span<const NormTerm> terms, int points, BlochVector* arg = nullptr) {
  double best = -1;
  const double golden = std::numbers::pi * (3 - std::sqrt(5.0));
  for (int i = 0; i < points; ++i) {
    const double z = 1 - 2 * (i + 0.5) / points;
    const double r = std::sqrt(1 - z * z);
    const BlochVector m(r * std::cos(golden * i), r * std::sin(golden * i), z);
    const double f = sum_of_norms(terms, m);
    if (f > best) {
      best = f;
      if (arg) *arg = m;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("lattice has 26 directions, 13 up to sign") {
  CHECK(lattice_directions(false).size() == 26);
  CHECK(lattice_directions(true).size() == 13);
  CHECK(lattice_directions(true)[0] == BlochVector::UnitX());
  CHECK(lattice_directions(true)[1] == BlochVector::UnitY());
}

TEST_CASE("isotropic objective resolves to x and is flagged") {
  const auto terms = greedy_terms(BlochVector::Zero(), Matrix3::Identity() / 3);
  const SphereMax s = maximize_sum_of_norms(terms, StateSpace::Full3D, {.even = true});
  CHECK(s.axis.isApprox(BlochVector::UnitX()));
  CHECK(s.degenerate);
  CHECK(s.value == doctest::Approx(2.0 / 3));
}

TEST_CASE("after an x outcome the best axis is orthogonal to x") {
  const auto terms = greedy_terms(BlochVector::UnitX() / 6, Matrix3::Identity() / 6);
  const SphereMax s = maximize_sum_of_norms(terms, StateSpace::Full3D, {.even = true});
  CHECK(std::abs(s.axis.x()) < 1e-9);
  CHECK(s.axis.isApprox(BlochVector::UnitY()));
  CHECK(s.value == doctest::Approx(std::sqrt(2.0) / 3));
}

TEST_CASE("diagonal A with V = 0 picks the top eigenvector") {
  CounterRng rng(5, StreamId::Test, 2);
  for (int t = 0; t < 10; ++t) {
    const BlochVector d(uniform01(rng), uniform01(rng), uniform01(rng));
    const auto terms = greedy_terms(BlochVector::Zero(), d.asDiagonal().toDenseMatrix());
    const SphereMax s = maximize_sum_of_norms(terms, StateSpace::Full3D, {.even = true});
    Eigen::Index k;
    d.maxCoeff(&k);
    CHECK(std::abs(std::abs(s.axis(k)) - 1) < 1e-9);
    BlochVector grid_arg;
    const double grid = brute_force_max(terms, 10000, &grid_arg);
    CHECK(s.value >= grid - 1e-12);
    CHECK(std::abs(std::abs(grid_arg(k)) - 1) < 0.05);
  }
}

TEST_CASE("random sum-of-norms objectives beat a dense grid") {
  CounterRng rng(9, StreamId::Test, 3);
  for (int t = 0; t < 20; ++t) {
    std::vector<NormTerm> terms(3);
    for (auto& term : terms) {
      term.offset = BlochVector(uniform01(rng) - 0.5, uniform01(rng) - 0.5, uniform01(rng) - 0.5);
      for (int i = 0; i < 9; ++i) term.map.data()[i] = uniform01(rng) - 0.5;
    }
    const SphereMax s = maximize_sum_of_norms(terms, StateSpace::Full3D);
    CHECK(std::abs(s.axis.norm() - 1) < 1e-12);
    CHECK(s.value == doctest::Approx(sum_of_norms(terms, s.axis)).epsilon(1e-14));
    CHECK(s.value >= brute_force_max(terms, 20000) - 1e-12);
  }
}

TEST_CASE("planar search matches a fine angle scan") {
  CounterRng rng(13, StreamId::Test, 4);
  for (int t = 0; t < 20; ++t) {
    std::vector<NormTerm> terms(2);
    for (auto& term : terms) {
      term.offset = BlochVector(uniform01(rng) - 0.5, uniform01(rng) - 0.5, 0);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) term.map(i, j) = uniform01(rng) - 0.5;
    }
    const SphereMax s = maximize_sum_of_norms(terms, StateSpace::Planar2D);
    CHECK(s.axis.z() == 0.0);
    double scan = 0;
    for (int i = 0; i < 100000; ++i) {
      const double psi = 2 * std::numbers::pi * i / 100000;
      scan = std::max(scan, sum_of_norms(terms, BlochVector(std::cos(psi), std::sin(psi), 0)));
    }
    CHECK(s.value >= scan - 1e-12);
  }
  const auto flat = greedy_terms(BlochVector::Zero(), Vec3<double>(0.5, 0.5, 0).asDiagonal());
  const SphereMax f = maximize_sum_of_norms(flat, StateSpace::Planar2D, {.even = true});
  CHECK(f.degenerate);
  CHECK(f.axis == BlochVector::UnitX());
}

TEST_CASE("Nelder-Mead minimizes the Rosenbrock function") {
  auto rosen = [](const Eigen::VectorXd& x) {
    double f = 0;
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i)
      f += 100 * std::pow(x(i + 1) - x(i) * x(i), 2) + std::pow(1 - x(i), 2);
    return f;
  };
  const auto r = nelder_mead_minimize(rosen, Eigen::Vector2d(-1.2, 1), {.initial_step = 0.5});
  CHECK(r.converged);
  CHECK((r.x - Eigen::Vector2d(1, 1)).norm() < 1e-6);
  const auto q = nelder_mead_minimize([](const Eigen::VectorXd& x) { return x.squaredNorm(); },
                                      Eigen::VectorXd::Constant(8, 1.0));
  CHECK(q.value < 1e-12);
}

TEST_CASE("greedy objective on random posteriors matches a dense grid") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  std::vector<BlochVector> grid;
  const int M = 20000;
  for (int i = 0; i < M; ++i) {
    const double z = 1 - (2 * i + 1.0) / M, r = std::sqrt(1 - z * z), ph = i * 2.399963229728653;
    grid.emplace_back(r * std::cos(ph), r * std::sin(ph), z);
  }
  // Includes nearly isotropic A, where the objective is flat around the top.
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<SignedAxis> axes;
    for (int k = 0; k < 1 + trial % 6; ++k)
      axes.push_back({BlochVector(g(rng), g(rng), g(rng)).normalized(), rng() & 1 ? 1 : -1});
    const PosteriorSummary post = posterior_summary(axes, StateSpace::Full3D);
    const std::array<NormTerm, 2> terms{NormTerm{post.V, post.A}, NormTerm{post.V, -post.A}};
    const SphereMax got = maximize_sum_of_norms(terms, StateSpace::Full3D, {.even = true});
    double best = 0;
    for (const auto& m : grid) best = std::max(best, sum_of_norms(terms, m));
    CHECK(got.value >= best - 1e-12);
  }
}
