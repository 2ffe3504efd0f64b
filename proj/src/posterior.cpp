#include "qse/posterior.hpp"

#include <cmath>

namespace qse {

PosteriorGrid::PosteriorGrid(const SphereRule& rule) : rule_(&rule), weights_(rule.weights) {}

void PosteriorGrid::reset() {
  weights_ = rule_->weights;
  log_scale_ = 0;
}

void PosteriorGrid::measure(const BlochVector& axis, int sign) {
  const double s = 0.5 * sign;
  weights_.array() *= 0.5 + s * (axis.transpose() * rule_->nodes).array().transpose();
}

void PosteriorGrid::measure_from(const PosteriorGrid& parent, const BlochVector& axis, int sign) {
  const double s = 0.5 * sign;
  weights_ = parent.weights_.array() *
             (0.5 + s * (axis.transpose() * rule_->nodes).array().transpose());
  log_scale_ = parent.log_scale_;
}

void PosteriorGrid::normalize() {
  const double m = mass();
  if (m <= 0) return;
  weights_ /= m;
  log_scale_ += std::log(m);
}

PosteriorSummary PosteriorGrid::summary() const {
  PosteriorSummary s;
  s.p = mass();
  s.V = first_moment();
  s.A = rule_->nodes * weights_.asDiagonal() * rule_->nodes.transpose();
  return s;
}

PosteriorSummary posterior_summary(std::span<const SignedAxis> axes, StateSpace mode) {
  for (const auto& a : axes) {
    require_unit(a.axis, "measurement axis");
    require_in_mode(a.axis, mode, "measurement axis");
    if (a.sign != 1 && a.sign != -1) throw std::invalid_argument("outcome sign must be +1 or -1");
  }
  const SphereRule rule = sphere_rule(mode, static_cast<int>(axes.size()) + 2);
  PosteriorGrid grid(rule);
  for (const auto& a : axes) grid.measure(a.axis, a.sign);
  return grid.summary();
}

}  // namespace qse
