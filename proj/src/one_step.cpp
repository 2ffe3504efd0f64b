#include "qse/adaptive.hpp"
#include "qse/local_fixed.hpp"

namespace qse {

namespace {

int count_plus(int copies, const BlochVector& n, const BlochVector& m, CounterRng& rng) {
  const double p = (1 + n.dot(m)) / 2;
  int k = 0;
  for (int i = 0; i < copies; ++i) k += uniform01(rng) < p;
  return k;
}

}  // namespace

FidelityResult one_step_adaptive(int N, StateSpace mode, const OneStepOptions& opt, const McConfig& mc) {
  if (!(opt.a > 0 && opt.a < 1)) throw std::invalid_argument("stage split exponent must lie in (0, 1)");
  if (!(opt.lambda > 0)) throw std::invalid_argument("lambda must be positive");
  const auto axes = tomography_axes(mode);
  const int d = static_cast<int>(axes.size());
  const int N0 = static_cast<int>(std::floor(std::pow(static_cast<double>(N), opt.a) + 1e-9));
  if (N0 < d) throw std::invalid_argument("first stage needs at least one copy per axis");
  if (N - N0 < (mode == StateSpace::Planar2D ? 1 : 2))
    throw std::invalid_argument("second stage needs copies");

  const StreamId stream = mode == StateSpace::Planar2D ? StreamId::OneStep2D : StreamId::OneStep3D;
  return run_monte_carlo(N, stream, mc, [&] {
    return [&](CounterRng& rng) {
      const BlochVector n = sample_prior(mode, rng);
      OutcomeCounts first;
      for (int i = 0; i < d; ++i) {
        const int copies = N0 / d + (i < N0 % d ? 1 : 0);
        first.perAxis.push_back({axes[static_cast<std::size_t>(i)],
                                 count_plus(copies, n, axes[static_cast<std::size_t>(i)], rng), copies});
      }
      const BlochVector M0 = clg_guess(first, mode).axis;

      const int rest = N - N0;
      BlochVector M;
      if (mode == StateSpace::Planar2D) {
        const BlochVector u(-M0.y(), M0.x(), 0);
        const double ru = 2.0 * count_plus(rest, n, u, rng) / rest - 1;
        const double omega = opt.lambda * ru;
        M = std::cos(omega) * M0 + std::sin(omega) * u;
      } else {
        Eigen::Index least;
        M0.cwiseAbs().minCoeff(&least);
        const BlochVector u = M0.cross(BlochVector::Unit(least)).normalized();
        const BlochVector v = M0.cross(u);
        const int nu = (rest + 1) / 2, nv = rest / 2;
        const double ru = 2.0 * count_plus(nu, n, u, rng) / nu - 1;
        const double rv = 2.0 * count_plus(nv, n, v, rng) / nv - 1;
        const double omega = opt.lambda * std::hypot(ru, rv);
        const double tau = std::atan2(rv, ru);
        M = std::cos(omega) * M0 + std::sin(omega) * (std::cos(tau) * u + std::sin(tau) * v);
      }
      return (1 + n.dot(M.normalized())) / 2;
    };
  });
}

}  // namespace qse
