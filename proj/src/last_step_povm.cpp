#include "qse/adaptive.hpp"
#include "qse/nelder_mead.hpp"

namespace qse {

std::size_t GeneralPovmStep::support() const {
  std::size_t n = 0;
  for (const auto& e : elements) n += e.weight > 1e-6;
  return n;
}

double GeneralPovmStep::feasibility_defect() const {
  double c = 0;
  BlochVector first = BlochVector::Zero();
  for (const auto& e : elements) {
    c += e.weight;
    first += e.weight * e.axis;
  }
  return std::max(std::abs(c - 1), first.norm());
}

namespace {

// Free vectors y_r map to a feasible POVM: w_r = y_r - mean(y), scaled so
// sum |w_r| = 1; then c_r = |w_r| and m_r = w_r / |w_r| satisfy every
// constraint identically.
Eigen::Matrix3Xd feasible_moments(const Eigen::VectorXd& y, int R, StateSpace mode) {
  const int dim = mode == StateSpace::Planar2D ? 2 : 3;
  Eigen::Matrix3Xd w = Eigen::Matrix3Xd::Zero(3, R);
  for (int r = 0; r < R; ++r) w.col(r).head(dim) = y.segment(r * dim, dim);
  w.colwise() -= w.rowwise().mean();
  const double total = w.colwise().norm().sum();
  if (total < 1e-300) return Eigen::Matrix3Xd::Zero(3, R);
  return w / total;
}

double objective(const PosteriorSummary& post, const Eigen::Matrix3Xd& w) {
  double d = 0;
  for (Eigen::Index r = 0; r < w.cols(); ++r) d += (w.col(r).norm() * post.V + post.A * w.col(r)).norm();
  return d;
}

}  // namespace

GeneralPovmStep optimize_last_step_povm(const PosteriorSummary& post, int R, int restarts,
                                        std::uint64_t seed, StateSpace mode) {
  if (R < 2 || R > 8) throw std::invalid_argument("R must lie in 2..8");
  if (restarts < 1) throw std::invalid_argument("need at least one restart");
  const int dim = mode == StateSpace::Planar2D ? 2 : 3;
  auto f = [&](const Eigen::VectorXd& y) { return -objective(post, feasible_moments(y, R, mode)); };

  Eigen::VectorXd best_y;
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < restarts; ++s) {
    CounterRng rng(seed, StreamId::LastStepPovm, static_cast<std::uint64_t>(s));
    Eigen::VectorXd y(R * dim);
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = 2 * uniform01(rng) - 1;
    // Repeated simplex runs from the previous optimum with shrinking steps.
    double step = 0.5;
    NelderMeadResult res{y, f(y), 0, false};
    for (int round = 0; round < 6; ++round, step /= 4) {
      res = nelder_mead_minimize(f, res.x, {.initial_step = step, .ftol = 1e-15, .xtol = 1e-12,
                                            .max_evaluations = 40000});
    }
    if (res.value < best - 1e-14) {
      best = res.value;
      best_y = res.x;
    }
  }

  const Eigen::Matrix3Xd w = feasible_moments(best_y, R, mode);
  GeneralPovmStep step;
  // Elements pointing the same way are one operator; merge them.
  for (Eigen::Index r = 0; r < w.cols(); ++r) {
    const double c = w.col(r).norm();
    if (c == 0) continue;
    const BlochVector m = w.col(r) / c;
    bool merged = false;
    for (auto& e : step.elements)
      if ((e.axis - m).norm() < 1e-4) {
        e.axis = (e.weight * e.axis + c * m).normalized();
        e.weight += c;
        merged = true;
        break;
      }
    if (!merged) step.elements.push_back({c, m});
  }
  step.delta = -best;
  return step;
}

}  // namespace qse
