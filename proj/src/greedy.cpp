#include "qse/adaptive.hpp"

#include "qse/quadrature.hpp"

#include <array>

namespace qse {

AdaptivePolicy AdaptivePolicy::uniform(int N, StateSpace mode, const BlochVector& axis) {
  if (N < 1) throw std::invalid_argument("copy count must be positive");
  AdaptivePolicy p;
  p.N = N;
  p.mode = mode;
  p.axes.resize(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) p.axes[static_cast<std::size_t>(k)].assign(std::size_t{1} << k, axis);
  return p;
}

const BlochVector& AdaptivePolicy::axis(const OutcomeString& prefix) const {
  const auto k = prefix.length();
  if (k >= axes.size()) throw std::out_of_range("prefix longer than the policy");
  for (auto d : prefix.digits)
    if (d > 1) throw std::invalid_argument("binary outcomes only");
  return axes[k][prefix.code()];
}

BlochVector AdaptivePolicy::signed_axis(int step, std::uint64_t code) const {
  const BlochVector& m = axes[static_cast<std::size_t>(step)][code & ((std::uint64_t{1} << step) - 1)];
  return outcome_sign(code, step) * m;
}

std::size_t AdaptivePolicy::parameter_count() const {
  std::size_t n = 0;
  for (const auto& level : axes) n += level.size();
  return n;
}

nlohmann::json AdaptivePolicy::to_json() const {
  nlohmann::json j;
  j["N"] = N;
  j["mode"] = std::string(to_string(mode));
  nlohmann::json a = nlohmann::json::object();
  for (int k = 0; k < N; ++k)
    for (std::uint64_t c = 0; c < axes[static_cast<std::size_t>(k)].size(); ++c) {
      const BlochVector& m = axes[static_cast<std::size_t>(k)][c];
      a[OutcomeString::from_code(c, k).str()] = {m.x(), m.y(), m.z()};
    }
  j["axes"] = std::move(a);
  return j;
}

AdaptivePolicy AdaptivePolicy::from_json(const nlohmann::json& j) {
  AdaptivePolicy p = uniform(j.at("N").get<int>(), parse_state_space(j.at("mode").get<std::string>()),
                             BlochVector::UnitX());
  std::vector<std::vector<bool>> seen(p.axes.size());
  for (std::size_t k = 0; k < p.axes.size(); ++k) seen[k].assign(p.axes[k].size(), false);
  for (const auto& [key, value] : j.at("axes").items()) {
    const OutcomeString s = OutcomeString::parse(key);
    if (s.length() >= p.axes.size()) throw std::invalid_argument("policy key too long: " + key);
    const BlochVector m(value.at(0).get<double>(), value.at(1).get<double>(), value.at(2).get<double>());
    require_unit(m, "policy axis");
    require_in_mode(m, p.mode, "policy axis");
    p.axes[s.length()][s.code()] = m;
    seen[s.length()][s.code()] = true;
  }
  for (const auto& level : seen)
    for (bool b : level)
      if (!b) throw std::invalid_argument("policy JSON is missing axes");
  return p;
}

namespace {

constexpr int kSplitDepth = 8;

// Depth-first traversal of the outcome tree. With `decide`, internal nodes
// get their axis from the greedy rule and store it; otherwise the policy's
// axes are used. leaf(code, grid) sees the unnormalized leaf posterior.
template <class Leaf>
void walk_tree(AdaptivePolicy& policy, bool decide, int workers, Leaf&& leaf) {
  const int N = policy.N;
  const SphereRule rule = sphere_rule(policy.mode, N + 1);
  const int split = std::min(N, kSplitDepth);

  auto node_axis = [&](int k, std::uint64_t code, const PosteriorGrid& g) -> const BlochVector& {
    auto& slot = policy.axes[static_cast<std::size_t>(k)][code];
    if (decide) slot = greedy_next_axis(g.summary(), policy.mode);
    return slot;
  };

  // Internal nodes above the split are visited once, serially.
  if (decide) {
    std::vector<PosteriorGrid> grids(static_cast<std::size_t>(split) + 1, PosteriorGrid(rule));
    auto top = [&](auto&& self, int k, std::uint64_t code) -> void {
      if (k == split) return;
      const BlochVector m = node_axis(k, code, grids[static_cast<std::size_t>(k)]);
      for (int o = 0; o < 2; ++o) {
        grids[static_cast<std::size_t>(k) + 1].measure_from(grids[static_cast<std::size_t>(k)], m, o ? -1 : 1);
        self(self, k + 1, code | (std::uint64_t(o) << k));
      }
    };
    top(top, 0, 0);
  }

  const std::size_t tasks = std::size_t{1} << split;
  parallel_for(tasks, workers, [&](std::size_t task) {
    std::vector<PosteriorGrid> grids(static_cast<std::size_t>(N) + 1, PosteriorGrid(rule));
    for (int k = 0; k < split; ++k)
      grids[static_cast<std::size_t>(k) + 1].measure_from(
          grids[static_cast<std::size_t>(k)], policy.axes[static_cast<std::size_t>(k)][task & ((std::uint64_t{1} << k) - 1)],
          outcome_sign(task, k));
    auto down = [&](auto&& self, int k, std::uint64_t code) -> void {
      const auto& g = grids[static_cast<std::size_t>(k)];
      if (k == N) {
        leaf(code, g);
        return;
      }
      const BlochVector m = node_axis(k, code, g);
      for (int o = 0; o < 2; ++o) {
        grids[static_cast<std::size_t>(k) + 1].measure_from(g, m, o ? -1 : 1);
        self(self, k + 1, code | (std::uint64_t(o) << k));
      }
    };
    down(down, split, task);
  });
}

PolicyEvaluation evaluate_walk(AdaptivePolicy& policy, bool decide, int workers) {
  if (policy.N > kExactTreeDepth + 4) throw std::invalid_argument("tree too deep to enumerate");
  PolicyEvaluation ev;
  const std::size_t leaves = std::size_t{1} << policy.N;
  ev.leaf_moduli.assign(leaves, 0);
  std::vector<double> degenerate(leaves, 0);
  walk_tree(policy, decide, workers, [&](std::uint64_t code, const PosteriorGrid& g) {
    const double v = g.first_moment().norm();
    ev.leaf_moduli[code] = v;
    if (v <= kDegenerateNorm * g.mass()) degenerate[code] = g.mass();
  });
  for (std::size_t i = 0; i < leaves; ++i) {
    ev.delta += ev.leaf_moduli[i];
    ev.degenerate_mass += degenerate[i];
  }
  ev.F = (1 + ev.delta) / 2;
  return ev;
}

}  // namespace

PolicyEvaluation evaluate_policy(const AdaptivePolicy& policy, int workers) {
  AdaptivePolicy copy = policy;
  return evaluate_walk(copy, false, workers);
}

SphereMax greedy_step(const PosteriorSummary& post, StateSpace mode) {
  const std::array<NormTerm, 2> terms{NormTerm{post.V, post.A}, NormTerm{post.V, -post.A}};
  return maximize_sum_of_norms(terms, mode, {.even = true});
}

BlochVector greedy_next_axis(const PosteriorSummary& post, StateSpace mode) {
  return greedy_step(post, mode).axis;
}

AdaptivePolicy greedy_policy(int N, StateSpace mode, int workers) {
  AdaptivePolicy policy = AdaptivePolicy::uniform(N, mode, tie_break_axis(mode));
  evaluate_walk(policy, true, workers);
  return policy;
}

GreedyRun greedy_run(int N, StateSpace mode, const McConfig& mc) {
  if (N < 1) throw std::invalid_argument("copy count must be positive");
  if (N <= kExactTreeDepth) {
    AdaptivePolicy policy = AdaptivePolicy::uniform(N, mode, tie_break_axis(mode));
    const PolicyEvaluation ev = evaluate_walk(policy, true, resolve_workers(mc.workers));
    FidelityResult r = FidelityResult::exact(N, ev.F, Method::ExactEnumeration);
    r.degenerate_mass = ev.degenerate_mass;
    return {std::move(policy), r};
  }
  const SphereRule rule = sphere_rule(mode, N + 1);
  const StreamId stream = mode == StateSpace::Planar2D ? StreamId::Greedy2D : StreamId::Greedy3D;
  FidelityResult r = run_monte_carlo(N, stream, mc, [&] {
    return [&, grid = PosteriorGrid(rule)](CounterRng& rng) mutable {
      const BlochVector n = sample_prior(mode, rng);
      grid.reset();
      for (int k = 0; k < N; ++k) {
        const BlochVector m = greedy_next_axis(grid.summary(), mode);
        grid.measure(m, uniform01(rng) < (1 + n.dot(m)) / 2 ? 1 : -1);
        grid.normalize();
      }
      return (1 + grid.first_moment().norm()) / 2;
    };
  });
  return {std::nullopt, r};
}

}  // namespace qse
