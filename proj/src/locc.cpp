#include "qse/adaptive.hpp"

#include "qse/quadrature.hpp"

namespace qse {

namespace {

struct TreeContext {
  const AdaptivePolicy& policy;
  const SphereRule& rule;
};

// Leaf terms as functions of the axis at node (k, code): every leaf below
// contributes |a + s B m| / 2 with a, B the moments of the posterior with
// that node's factor removed.
std::vector<NormTerm> node_terms(const TreeContext& ctx, int k, std::uint64_t code) {
  const AdaptivePolicy& p = ctx.policy;
  PosteriorGrid prefix(ctx.rule);
  for (int j = 0; j < k; ++j) prefix.measure(p.signed_axis(j, code), 1);

  std::vector<NormTerm> terms;
  terms.reserve(std::size_t{1} << (p.N - k));
  std::vector<PosteriorGrid> grids(static_cast<std::size_t>(p.N) + 1, PosteriorGrid(ctx.rule));
  for (int s : {1, -1}) {
    grids[static_cast<std::size_t>(k) + 1] = prefix;
    const std::uint64_t branch = code | (std::uint64_t(s < 0) << k);
    auto down = [&](auto&& self, int j, std::uint64_t c) -> void {
      const PosteriorGrid& g = grids[static_cast<std::size_t>(j)];
      if (j == p.N) {
        const Eigen::Matrix3Xd& nodes = ctx.rule.nodes;
        const Matrix3 B = nodes * g.weights().asDiagonal() * nodes.transpose();
        terms.push_back({g.first_moment() / 2, s * B / 2});
        return;
      }
      const BlochVector& m = p.axes[static_cast<std::size_t>(j)][c & ((std::uint64_t{1} << j) - 1)];
      for (int o = 0; o < 2; ++o) {
        grids[static_cast<std::size_t>(j) + 1].measure_from(g, m, o ? -1 : 1);
        self(self, j + 1, c | (std::uint64_t(o) << j));
      }
    };
    down(down, k + 1, branch);
  }
  return terms;
}

struct AscentResult {
  double F = 0;
  int sweeps = 0;
  bool converged = false;
};

AscentResult coordinate_ascent(AdaptivePolicy& policy, const SphereRule& rule, int max_sweeps) {
  const TreeContext ctx{policy, rule};
  AscentResult r;
  r.F = evaluate_policy(policy).F;
  for (; r.sweeps < max_sweeps; ++r.sweeps) {
    const double start = r.F;
    for (int k = 0; k < policy.N; ++k)
      for (std::uint64_t c = 0; c < policy.axes[static_cast<std::size_t>(k)].size(); ++c) {
        const std::vector<NormTerm> terms = node_terms(ctx, k, c);
        BlochVector& m = policy.axes[static_cast<std::size_t>(k)][c];
        const double current = sum_of_norms(terms, m);
        const SphereMax best = maximize_sum_of_norms(terms, policy.mode);
        if (best.value > current + 1e-13 * (1 + current)) {
          m = best.axis;
          r.F += (best.value - current) / 2;
        }
      }
    if (r.F - start <= 1e-13) {
      r.converged = true;
      ++r.sweeps;
      break;
    }
  }
  r.F = evaluate_policy(policy).F;
  return r;
}

double gaussian(CounterRng& rng) {
  const double u1 = 1 - uniform01(rng), u2 = uniform01(rng);
  return std::sqrt(-2 * std::log(u1)) * std::cos(2 * std::numbers::pi * u2);
}

AdaptivePolicy perturb(const AdaptivePolicy& base, double sigma, CounterRng& rng) {
  AdaptivePolicy p = base;
  for (auto& level : p.axes)
    for (auto& m : level) {
      BlochVector g(gaussian(rng), gaussian(rng), p.mode == StateSpace::Planar2D ? 0.0 : gaussian(rng));
      g -= g.dot(m) * m;
      m = (m + sigma * g).normalized();
    }
  return p;
}

constexpr int kRestartsPerRound = 4;

}  // namespace

LoccSolution locc_optimize(int N, StateSpace mode, const LoccOptions& options) {
  if (N < 1 || N > 8) throw std::invalid_argument("locc_optimize supports 1 <= N <= 8");
  if (options.restarts < 0) throw std::invalid_argument("restarts must be non-negative");
  const SphereRule rule = sphere_rule(mode, N + 1);

  LoccSolution sol;
  sol.policy = greedy_policy(N, mode);
  sol.trace.greedy_F = evaluate_policy(sol.policy).F;
  const AscentResult first = coordinate_ascent(sol.policy, rule, options.max_sweeps);
  sol.F = first.F;
  sol.trace.sweeps = first.sweeps;
  sol.converged = first.converged;

  // Rounds of restarts share one base policy so the outcome does not depend
  // on how many run concurrently.
  for (int done = 0; done < options.restarts; done += kRestartsPerRound) {
    const int count = std::min(kRestartsPerRound, options.restarts - done);
    std::vector<AdaptivePolicy> candidates(static_cast<std::size_t>(count));
    std::vector<AscentResult> results(static_cast<std::size_t>(count));
    const AdaptivePolicy base = sol.policy;
    parallel_for(static_cast<std::size_t>(count), options.workers, [&](std::size_t i) {
      CounterRng rng(options.seed, StreamId::Locc, static_cast<std::uint64_t>(done) + i);
      candidates[i] = perturb(base, options.perturbation, rng);
      results[i] = coordinate_ascent(candidates[i], rule, options.max_sweeps);
    });
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      sol.trace.sweeps += results[i].sweeps;
      ++sol.trace.restarts;
      if (results[i].F > sol.F + 1e-10) {
        sol.F = results[i].F;
        sol.policy = std::move(candidates[i]);
        sol.converged = results[i].converged;
        ++sol.trace.improved_restarts;
      }
    }
  }
  sol.trace.best_F = sol.F;
  if (N == 4 && mode == StateSpace::Full3D) sol.angles = fit_locc_angles(sol.policy);
  return sol;
}

LoccAngles fit_locc_angles(const AdaptivePolicy& policy) {
  if (policy.N < 4 || policy.mode != StateSpace::Full3D)
    throw std::invalid_argument("angle fit needs a 3D policy with at least four steps");
  LoccAngles sum;
  int count = 0;
  for (std::uint64_t c = 0; c < 8; ++c) {
    const BlochVector m1 = policy.signed_axis(0, c), m2 = policy.signed_axis(1, c);
    const BlochVector u1 = m1.cross(m2).normalized();
    const BlochVector s = (m1 + m2).normalized();
    const BlochVector m3 = policy.signed_axis(2, c);
    const double alpha = std::acos(std::min(1.0, std::abs(m3.dot(u1))));

    const BlochVector u2 = s.cross(m3).normalized();
    BlochVector a4 = policy.axes[3][c];
    if (a4.dot(u2) < 0) a4 = -a4;
    const double gamma = std::acos(std::min(1.0, a4.dot(u2)));
    double beta = std::atan2(-a4.dot(s), a4.dot(m3));
    while (beta > std::numbers::pi / 2) beta -= std::numbers::pi;
    while (beta <= -std::numbers::pi / 2) beta += std::numbers::pi;
    sum.alpha += alpha, sum.beta += beta, sum.gamma += gamma;
    ++count;
  }
  return {sum.alpha / count, sum.beta / count, sum.gamma / count};
}

}  // namespace qse
