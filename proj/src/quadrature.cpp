#include "qse/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace qse {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1)};
}

}  // namespace

GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre needs at least one node");
  GaussLegendre rule{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(n, x).second;
    const double w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

SphereRule product_rule(int polar_nodes, int azimuth_nodes) {
  if (azimuth_nodes < 1) throw std::invalid_argument("need at least one azimuth node");
  const GaussLegendre gl = gauss_legendre(polar_nodes);
  SphereRule rule;
  rule.mode = StateSpace::Full3D;
  rule.degree = std::min(2 * polar_nodes - 1, azimuth_nodes - 1);
  rule.nodes.resize(3, polar_nodes * azimuth_nodes);
  rule.weights.resize(polar_nodes * azimuth_nodes);
  Eigen::Index q = 0;
  for (int i = 0; i < polar_nodes; ++i) {
    const double u = gl.nodes[i];
    const double s = std::sqrt(1 - u * u);
    for (int j = 0; j < azimuth_nodes; ++j, ++q) {
      const double phi = 2 * std::numbers::pi * j / azimuth_nodes;
      rule.nodes.col(q) << s * std::cos(phi), s * std::sin(phi), u;
      rule.weights[q] = gl.weights[i] / (2.0 * azimuth_nodes);
    }
  }
  return rule;
}

SphereRule sphere_rule(StateSpace mode, int degree) {
  if (degree < 0) throw std::invalid_argument("negative quadrature degree");
  if (mode == StateSpace::Full3D) {
    SphereRule rule = product_rule((degree + 2) / 2, degree + 1);
    rule.degree = degree;
    return rule;
  }
  const int m = degree + 1;
  SphereRule rule;
  rule.mode = StateSpace::Planar2D;
  rule.degree = degree;
  rule.nodes.resize(3, m);
  rule.weights = Eigen::VectorXd::Constant(m, 1.0 / m);
  for (int j = 0; j < m; ++j) {
    const double theta = 2 * std::numbers::pi * j / m;
    rule.nodes.col(j) << std::cos(theta), std::sin(theta), 0.0;
  }
  return rule;
}

double integrate(const SphereRule& rule, const std::function<double(const BlochVector&)>& f) {
  double sum = 0;
  for (Eigen::Index q = 0; q < rule.size(); ++q) sum += rule.weights[q] * f(rule.nodes.col(q));
  return sum;
}

namespace {

double fixed_gl(const std::function<double(double)>& f, double a, double b,
                const GaussLegendre& gl) {
  const double half = (b - a) / 2, mid = (a + b) / 2;
  double s = 0;
  for (Eigen::Index i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * f(mid + half * gl.nodes[i]);
  return s * half;
}

double adapt(const std::function<double(double)>& f, double a, double b, double whole,
             double tol, const GaussLegendre& gl, int depth) {
  const double mid = (a + b) / 2;
  const double left = fixed_gl(f, a, mid, gl);
  const double right = fixed_gl(f, mid, b, gl);
  const double refined = left + right;
  // Floor at a few ulps of the running value; below that the difference is
  // rounding noise and halving tol would only recurse to the depth cap.
  const double floor = 64 * std::numeric_limits<double>::epsilon() * std::abs(refined);
  if (std::abs(refined - whole) <= std::max(tol, floor) || depth >= 30) return refined;
  return adapt(f, a, mid, left, tol / 2, gl, depth + 1) +
         adapt(f, mid, b, right, tol / 2, gl, depth + 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol, int order) {
  thread_local std::map<int, GaussLegendre> cache;
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, gauss_legendre(order)).first;
  const GaussLegendre& gl = it->second;
  return adapt(f, a, b, fixed_gl(f, a, b, gl), tol, gl, 0);
}

double integrate_adaptive_2d(const std::function<double(double, double)>& f, double ax,
                             double bx, double ay, double by, double tol, int order) {
  const double inner_tol = tol / (4 * std::max(1.0, by - ay));
  auto outer = [&](double x) {
    return integrate_adaptive([&](double y) { return f(x, y); }, ay, by, inner_tol, order);
  };
  return integrate_adaptive(outer, ax, bx, tol, order);
}

}  // namespace qse
