#include "qse/local_fixed.hpp"

#include "qse/adaptive.hpp"
#include "qse/quadrature.hpp"

#include <algorithm>
#include <map>

namespace qse {

std::string_view to_string(FixedKind kind) {
  switch (kind) {
    case FixedKind::Tomography2D: return "tomo2d";
    case FixedKind::Tomography3D: return "tomo3d";
    case FixedKind::Isotropic2D: return "iso2d";
    case FixedKind::Random3D: return "rand3d";
  }
  return "?";
}

std::string_view to_string(Estimator rule) { return rule == Estimator::CLG ? "clg" : "og"; }

StateSpace FixedScheme::mode() const {
  return kind == FixedKind::Tomography2D || kind == FixedKind::Isotropic2D ? StateSpace::Planar2D
                                                                          : StateSpace::Full3D;
}

int FixedScheme::axis_count() const { return mode() == StateSpace::Planar2D ? 2 : 3; }

int FixedScheme::per_axis() const {
  if (kind != FixedKind::Tomography2D && kind != FixedKind::Tomography3D)
    throw std::invalid_argument("per-axis repetitions only exist for tomography");
  if (N < 1 || N % axis_count() != 0)
    throw std::invalid_argument("tomography needs N divisible by " + std::to_string(axis_count()));
  return N / axis_count();
}

std::vector<BlochVector> tomography_axes(StateSpace mode) {
  if (mode == StateSpace::Planar2D) return {BlochVector::UnitX(), BlochVector::UnitY()};
  return {BlochVector::UnitX(), BlochVector::UnitY(), BlochVector::UnitZ()};
}

double tomography_outcome_prob(const FixedScheme& scheme, const OutcomeCounts& counts,
                               const BlochVector& n) {
  const int reps = scheme.per_axis();
  if (static_cast<int>(counts.perAxis.size()) != scheme.axis_count())
    throw std::invalid_argument("counts do not match the scheme's axes");
  require_unit(n, "state");
  double p = 1;
  for (const auto& c : counts.perAxis) {
    if (c.total != reps || c.plus < 0 || c.plus > c.total)
      throw std::invalid_argument("counts do not match the scheme's repetitions");
    const double up = (1 + n.dot(c.axis)) / 2;
    p *= binomial(c.total, c.plus) * std::pow(up, c.plus) * std::pow(1 - up, c.total - c.plus);
  }
  return p;
}

Guess clg_guess(const OutcomeCounts& counts, StateSpace mode) {
  BlochVector r = BlochVector::Zero();
  for (const auto& c : counts.perAxis) {
    if (c.total < 1 || c.plus < 0 || c.plus > c.total) throw std::invalid_argument("invalid counts");
    r += (2 * c.alpha() - 1) * c.axis;
  }
  return optimal_guess(r, mode);
}

namespace {

// Per-axis likelihood tables: table[k](j) = P(k plus outcomes | node j).
std::vector<Eigen::ArrayXd> likelihood_table(const SphereRule& rule, const BlochVector& m, int reps) {
  std::vector<Eigen::ArrayXd> t(static_cast<std::size_t>(reps) + 1, Eigen::ArrayXd(rule.size()));
  for (Eigen::Index j = 0; j < rule.size(); ++j) {
    const double up = (1 + rule.nodes.col(j).dot(m)) / 2;
    for (int k = 0; k <= reps; ++k)
      t[static_cast<std::size_t>(k)](j) = binomial(reps, k) * std::pow(up, k) * std::pow(1 - up, reps - k);
  }
  return t;
}

struct Tomography {
  FixedScheme scheme;
  int reps;
  std::vector<BlochVector> axes;
  SphereRule rule;
  std::vector<std::vector<Eigen::ArrayXd>> tables;

  explicit Tomography(const FixedScheme& s)
      : scheme(s), reps(s.per_axis()), axes(tomography_axes(s.mode())),
        rule(sphere_rule(s.mode(), s.N + 1)) {
    for (const auto& m : axes) tables.push_back(likelihood_table(rule, m, reps));
  }

  // Prior mass p and first moment V of a count vector.
  std::pair<double, BlochVector> moments(const std::vector<int>& k) const {
    Eigen::ArrayXd w = rule.weights.array();
    for (std::size_t i = 0; i < k.size(); ++i) w *= tables[i][static_cast<std::size_t>(k[i])];
    return {w.sum(), rule.nodes * w.matrix()};
  }

  OutcomeCounts counts(const std::vector<int>& k) const {
    OutcomeCounts c;
    for (std::size_t i = 0; i < k.size(); ++i) c.perAxis.push_back({axes[i], k[i], reps});
    return c;
  }
};

FidelityResult tomography_exact(const FixedScheme& scheme, Estimator rule, int workers) {
  const Tomography tomo(scheme);
  const int d = scheme.axis_count(), reps = tomo.reps;
  // |V| and M.V are invariant under axis permutations and k -> reps - k, so
  // only sorted, folded count vectors are evaluated.
  std::map<std::vector<int>, long> classes;
  std::vector<int> k(static_cast<std::size_t>(d), 0);
  for (;;) {
    std::vector<int> key(k);
    for (auto& v : key) v = std::min(v, reps - v);
    std::sort(key.begin(), key.end());
    ++classes[key];
    int i = 0;
    while (i < d && ++k[static_cast<std::size_t>(i)] > reps) k[static_cast<std::size_t>(i++)] = 0;
    if (i == d) break;
  }
  std::vector<std::pair<std::vector<int>, long>> list(classes.begin(), classes.end());
  std::vector<double> gain(list.size()), degenerate(list.size());
  parallel_for(list.size(), workers, [&](std::size_t c) {
    const auto& [key, mult] = list[c];
    const auto [p, V] = tomo.moments(key);
    const Guess g = rule == Estimator::CLG ? clg_guess(tomo.counts(key), scheme.mode())
                                           : optimal_guess(V, scheme.mode());
    gain[c] = mult * (rule == Estimator::CLG ? g.axis.dot(V) : V.norm());
    degenerate[c] = g.degenerate ? mult * p : 0;
  });
  double delta = 0, deg = 0;
  for (std::size_t c = 0; c < list.size(); ++c) delta += gain[c], deg += degenerate[c];
  FidelityResult r = FidelityResult::exact(scheme.N, (1 + delta) / 2, Method::ExactEnumeration);
  r.degenerate_mass = deg;
  return r;
}

int sample_plus(int copies, const BlochVector& n, const BlochVector& m, CounterRng& rng) {
  const double p = (1 + n.dot(m)) / 2;
  int k = 0;
  for (int i = 0; i < copies; ++i) k += uniform01(rng) < p;
  return k;
}

FidelityResult tomography_mc(const FixedScheme& scheme, Estimator rule, const McConfig& mc) {
  const Tomography tomo(scheme);
  const StreamId stream = scheme.mode() == StateSpace::Planar2D ? StreamId::Tomography2D : StreamId::Tomography3D;
  return run_monte_carlo(scheme.N, stream, mc, [&] {
    return [&](CounterRng& rng) {
      const BlochVector n = sample_prior(scheme.mode(), rng);
      std::vector<int> k;
      for (const auto& m : tomo.axes) k.push_back(sample_plus(tomo.reps, n, m, rng));
      if (rule == Estimator::CLG) return (1 + n.dot(clg_guess(tomo.counts(k), scheme.mode()).axis)) / 2;
      // Averaging the score over the posterior given the counts.
      const auto [p, V] = tomo.moments(k);
      return (1 + V.norm() / p) / 2;
    };
  });
}

AdaptivePolicy fixed_policy(const std::vector<BlochVector>& axes, StateSpace mode) {
  AdaptivePolicy p = AdaptivePolicy::uniform(static_cast<int>(axes.size()), mode, axes.front());
  for (std::size_t k = 0; k < axes.size(); ++k) std::fill(p.axes[k].begin(), p.axes[k].end(), axes[k]);
  return p;
}

FidelityResult sequence_mc(int N, StateSpace mode, StreamId stream, const McConfig& mc,
                           const std::function<BlochVector(int, CounterRng&)>& axis_at) {
  const SphereRule rule = sphere_rule(mode, N + 1);
  return run_monte_carlo(N, stream, mc, [&] {
    return [&, grid = PosteriorGrid(rule)](CounterRng& rng) mutable {
      const FlushDenormals ftz;
      const BlochVector n = sample_prior(mode, rng);
      grid.reset();
      for (int k = 0; k < N; ++k) {
        const BlochVector m = axis_at(k, rng);
        grid.measure(m, uniform01(rng) < (1 + n.dot(m)) / 2 ? 1 : -1);
        if (k % 16 == 15) grid.normalize();
      }
      return (1 + grid.first_moment().norm() / grid.mass()) / 2;
    };
  });
}

}  // namespace

FidelityResult fixed_scheme_fidelity(const FixedScheme& scheme, Estimator rule, const McConfig& mc,
                                     Evaluation how) {
  switch (scheme.kind) {
    case FixedKind::Isotropic2D:
      if (rule != Estimator::OG) throw std::invalid_argument("iso2d uses the optimal guess");
      return isotropic_2d_fidelity(scheme.N, mc, how);
    case FixedKind::Random3D:
      if (rule != Estimator::OG) throw std::invalid_argument("rand3d uses the optimal guess");
      if (how == Evaluation::Exact) throw std::invalid_argument("rand3d is Monte Carlo only");
      return random_scheme_fidelity(scheme.N, mc);
    default:
      break;
  }
  const double states = std::pow(scheme.per_axis() + 1.0, scheme.axis_count());
  const bool exact = how == Evaluation::Exact || (how == Evaluation::Auto && states <= kMaxEnumeratedStates);
  return exact ? tomography_exact(scheme, rule, resolve_workers(mc.workers)) : tomography_mc(scheme, rule, mc);
}

FidelityResult isotropic_2d_fidelity(int N, const McConfig& mc, Evaluation how) {
  if (N < 1) throw std::invalid_argument("copy count must be positive");
  std::vector<BlochVector> axes;
  for (int k = 1; k <= N; ++k) {
    const double t = k * std::numbers::pi / N;
    axes.emplace_back(std::cos(t), std::sin(t), 0.0);
  }
  const bool exact = how == Evaluation::Exact || (how == Evaluation::Auto && N <= kExactTreeDepth);
  if (exact) {
    const PolicyEvaluation ev = evaluate_policy(fixed_policy(axes, StateSpace::Planar2D), resolve_workers(mc.workers));
    FidelityResult r = FidelityResult::exact(N, ev.F, Method::ExactEnumeration);
    r.degenerate_mass = ev.degenerate_mass;
    return r;
  }
  return sequence_mc(N, StateSpace::Planar2D, StreamId::Isotropic2D, mc,
                     [&](int k, CounterRng&) { return axes[static_cast<std::size_t>(k)]; });
}

FidelityResult random_scheme_fidelity(int N, const McConfig& mc) {
  if (N < 1) throw std::invalid_argument("copy count must be positive");
  return sequence_mc(N, StateSpace::Full3D, StreamId::Random3D, mc,
                     [](int, CounterRng& rng) { return sample_prior(StateSpace::Full3D, rng); });
}

}  // namespace qse
