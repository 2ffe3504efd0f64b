// posterior.hpp
// Unnormalized posterior moments after a sequence of von Neumann outcomes.

#pragma once

#include "qse/core.hpp"
#include "qse/quadrature.hpp"

#include <span>

namespace qse {

/// p = prior mass of the record, V = integral of n p_n, A = integral of
/// n n^T p_n. trace(A) = p since |n| = 1.
struct PosteriorSummary {
  double p = 1;
  BlochVector V = BlochVector::Zero();
  Matrix3 A = Matrix3::Identity() / 3;
};

/// Measurement axis together with the observed sign (+1 or -1).
struct SignedAxis {
  BlochVector axis;
  int sign = 1;
};

/// Posterior density sampled on an exact quadrature rule. Each outcome
/// multiplies the node weights by (1 + s n.m)/2; the rule stays exact as
/// long as the record length plus two does not exceed its degree.
class PosteriorGrid {
 public:
  explicit PosteriorGrid(const SphereRule& rule);

  void reset();
  void measure(const BlochVector& axis, int sign);
  /// This grid becomes `parent` followed by one more outcome.
  void measure_from(const PosteriorGrid& parent, const BlochVector& axis, int sign);
  /// Divides the weights by their sum; accumulated in log_scale().
  void normalize();

  double mass() const { return weights_.sum(); }
  BlochVector first_moment() const { return rule_->nodes * weights_; }
  PosteriorSummary summary() const;

  const SphereRule& rule() const { return *rule_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  double log_scale() const { return log_scale_; }

 private:
  const SphereRule* rule_;
  Eigen::VectorXd weights_;
  double log_scale_ = 0;
};

/// Exact posterior moments for a list of signed axes.
PosteriorSummary posterior_summary(std::span<const SignedAxis> axes, StateSpace mode);

}  // namespace qse
