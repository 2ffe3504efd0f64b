// quadrature.hpp
// Gauss-Legendre rules, exact product rules on the sphere and circle, and
// adaptive one- and two-dimensional integration.

#pragma once

#include "qse/core.hpp"

#include <functional>

namespace qse {

struct GaussLegendre {
  Eigen::VectorXd nodes;    // ascending, in (-1, 1)
  Eigen::VectorXd weights;  // sum to 2
};

GaussLegendre gauss_legendre(int n);

/// Nodes and weights averaging over the prior of a state space. Weights sum
/// to one, so applying the rule to f gives the prior mean of f.
struct SphereRule {
  StateSpace mode = StateSpace::Full3D;
  int degree = 0;
  Eigen::Matrix3Xd nodes;
  Eigen::VectorXd weights;

  Eigen::Index size() const { return weights.size(); }
};

/// Rule exact for every polynomial in (n_x, n_y, n_z) of total degree at most
/// `degree`: Gauss-Legendre in cos(theta) with ceil((degree+1)/2) nodes times
/// a (degree+1)-point uniform rule in phi; on the equator a (degree+1)-point
/// uniform rule in theta.
SphereRule sphere_rule(StateSpace mode, int degree);

/// Full3D product rule with explicit node counts.
SphereRule product_rule(int polar_nodes, int azimuth_nodes);

/// Prior mean of f(n) under a rule.
double integrate(const SphereRule& rule, const std::function<double(const BlochVector&)>& f);

/// Adaptive Gauss-Legendre on [a, b] by interval bisection until the
/// coarse and refined estimates agree within tol.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-12, int order = 10);

/// Nested adaptive integral of f(x, y) over [ax, bx] x [ay, by].
double integrate_adaptive_2d(const std::function<double(double, double)>& f, double ax,
                             double bx, double ay, double by, double tol = 1e-12,
                             int order = 10);

}  // namespace qse
