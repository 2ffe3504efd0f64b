#include <doctest.h>

#include "qse/mc.hpp"

#include <cstdlib>

using namespace qse;

TEST_CASE("Welford accumulators merge exactly") {
  McAccumulator a, b, all;
  for (int i = 0; i < 10; ++i) {
    const double x = std::sin(i * 1.7);
    (i < 4 ? a : b).add(x);
    all.add(x);
  }
  a.merge(b);
  CHECK(a.count == all.count);
  CHECK(a.mean == doctest::Approx(all.mean).epsilon(1e-14));
  CHECK(a.m2 == doctest::Approx(all.m2).epsilon(1e-13));
}

TEST_CASE("mc_reduce rejects empty and mixed-seed inputs") {
  CHECK_THROWS_AS(mc_reduce({}, 1), std::invalid_argument);
  McAccumulator a{1, 0, 2, 0.5, 0.1}, b{2, 1, 2, 0.5, 0.1};
  const McAccumulator both[] = {a, b};
  CHECK_THROWS_AS(mc_reduce(both, 1), std::invalid_argument);
}

TEST_CASE("mc_reduce is order independent") {
  McAccumulator a{4, 1, 3, 0.2, 0.3}, b{4, 0, 5, 0.6, 0.1};
  const McAccumulator ab[] = {a, b}, ba[] = {b, a};
  const FidelityResult x = mc_reduce(ab, 3), y = mc_reduce(ba, 3);
  CHECK(x.F == y.F);
  CHECK(x.std_error == y.std_error);
  CHECK(x.trials == 8);
  CHECK(x.method == Method::MonteCarlo);
}

TEST_CASE("Monte Carlo results do not depend on the worker count") {
  auto make = [] { return [](CounterRng& rng) { return uniform01(rng); }; };
  McConfig cfg{5000, 42, 1};
  const FidelityResult one = run_monte_carlo(1, StreamId::Test, cfg, make);
  cfg.workers = 4;
  const FidelityResult four = run_monte_carlo(1, StreamId::Test, cfg, make);
  CHECK(one.F == four.F);
  CHECK(one.std_error == four.std_error);
  CHECK(std::abs(one.F - 0.5) < 4 * one.std_error);
  CHECK(one.std_error == doctest::Approx(std::sqrt(1.0 / 12 / 5000)).epsilon(0.05));
}

TEST_CASE("worker exceptions propagate") {
  auto make = [] { return [](CounterRng&) -> double { throw std::runtime_error("boom"); }; };
  CHECK_THROWS_AS(run_monte_carlo(1, StreamId::Test, {1000, 1, 3}, make), std::runtime_error);
}

TEST_CASE("worker count resolution") {
  CHECK(resolve_workers(3) == 3);
  setenv("QSE_WORKERS", "2", 1);
  CHECK(resolve_workers(0) == 2);
  unsetenv("QSE_WORKERS");
  CHECK(resolve_workers(0) >= 1);
}
