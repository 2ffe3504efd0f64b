#include "qse/sphere_opt.hpp"

#include <array>

namespace qse {

namespace {

struct Local {
  double f = 0;
  BlochVector g = BlochVector::Zero();
  Matrix3 H = Matrix3::Zero();
};

Local evaluate(std::span<const NormTerm> terms, const BlochVector& m) {
  Local out;
  for (const auto& t : terms) {
    const BlochVector r = t.offset + t.map * m;
    const double n = r.norm();
    out.f += n;
    if (n < 1e-300) continue;
    const BlochVector u = r / n;
    out.g += t.map.transpose() * u;
    out.H += t.map.transpose() * ((Matrix3::Identity() - u * u.transpose()) / n) * t.map;
  }
  return out;
}

std::pair<BlochVector, BlochVector> tangent_basis(const BlochVector& m) {
  const BlochVector e = std::abs(m.x()) < 0.6 ? BlochVector::UnitX()
                        : std::abs(m.y()) < 0.6 ? BlochVector::UnitY()
                                                : BlochVector::UnitZ();
  const BlochVector t1 = (e - e.dot(m) * m).normalized();
  return {t1, m.cross(t1)};
}

struct Ascent {
  BlochVector m;
  double f;
  double curvature;  // largest Riemannian Hessian eigenvalue (<= 0 at a max)
  bool moved;
  int iterations;
};

Ascent ascend_sphere(std::span<const NormTerm> terms, BlochVector m, const SphereOptOptions& opt) {
  const BlochVector start = m;
  Local L = evaluate(terms, m);
  int it = 0;
  double curvature = 0;
  for (; it < opt.max_iterations; ++it) {
    const auto [t1, t2] = tangent_basis(m);
    const Eigen::Vector2d gr(t1.dot(L.g), t2.dot(L.g));
    Eigen::Matrix2d Hr;
    Hr << t1.dot(L.H * t1), t1.dot(L.H * t2), t2.dot(L.H * t1), t2.dot(L.H * t2);
    Hr -= m.dot(L.g) * Eigen::Matrix2d::Identity();
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(Hr);
    curvature = eig.eigenvalues()(1);
    if (gr.norm() <= opt.tolerance * (1 + L.f)) break;

    const double scale = std::max(1e-12, eig.eigenvalues().cwiseAbs().maxCoeff());
    // Newton where the model is concave, otherwise a shifted (trust-region
    // like) step.
    Eigen::Vector2d step;
    const bool concave = curvature < -1e-10 * scale;
    if (concave)
      step = -Hr.ldlt().solve(gr);
    else
      step = -(Hr - (curvature + 0.5 * scale + gr.norm()) * Eigen::Matrix2d::Identity()).ldlt().solve(gr);
    if (step.norm() > 1) step.normalize();

    auto try_step = [&](double t) {
      const BlochVector cand = (m + t * (step(0) * t1 + step(1) * t2)).normalized();
      return std::pair{cand, evaluate(terms, cand)};
    };
    bool accepted = false;
    const double f_old = L.f;
    for (double t = 1; t > 1e-6; t /= 4) {
      auto [cand, C] = try_step(t);
      if (C.f > L.f) {
        // The shifted step is short on flat ground; keep doubling it.
        for (double u = 2 * t; !concave && t == 1 && u * step.norm() <= 1; u *= 2) {
          auto [further, D] = try_step(u);
          if (!(D.f > C.f)) break;
          cand = further, C = D;
        }
        m = cand;
        L = C;
        accepted = true;
        break;
      }
    }
    if (!accepted || L.f - f_old <= 1e-16 * (1 + f_old)) break;
  }
  return {m, L.f, curvature, (m - start).norm() > 1e-9, it};
}

BlochVector on_circle(double psi) { return {std::cos(psi), std::sin(psi), 0.0}; }

SphereMax maximize_planar(std::span<const NormTerm> terms, const SphereOptOptions& opt) {
  constexpr int kGrid = 64;
  const double span = (opt.even ? 1 : 2) * std::numbers::pi;
  const double h = span / kGrid;
  auto f = [&](double psi) { return sum_of_norms(terms, on_circle(psi)); };

  int best = 0;
  double best_f = f(0), worst_f = best_f;
  for (int i = 1; i < kGrid; ++i) {
    const double v = f(i * h);
    worst_f = std::min(worst_f, v);
    if (v > best_f + 1e-13 * (1 + std::abs(best_f))) {
      best_f = v;
      best = i;
    }
  }
  if (best_f - worst_f <= 1e-13 * (1 + best_f)) return {on_circle(0), best_f, true, 0};

  // Golden-section on the bracket around the best grid point.
  const double inv_phi = (std::sqrt(5.0) - 1) / 2;
  double a = (best - 1) * h, b = (best + 1) * h;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  int it = 0;
  while (b - a > 1e-9 && it < 200) {
    ++it;
    if (fc >= fd) {
      b = d, d = c, fd = fc;
      c = b - inv_phi * (b - a), fc = f(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + inv_phi * (b - a), fd = f(d);
    }
  }
  double psi = fc >= fd ? c : d;
  double fpsi = std::max(fc, fd);
  if (best_f > fpsi) psi = best * h, fpsi = best_f;

  double curvature = 0;
  for (int k = 0; k < opt.max_iterations; ++k, ++it) {
    const BlochVector m = on_circle(psi);
    const BlochVector t(-std::sin(psi), std::cos(psi), 0.0);
    const Local L = evaluate(terms, m);
    const double d1 = t.dot(L.g);
    curvature = t.dot(L.H * t) - m.dot(L.g);
    if (std::abs(d1) <= opt.tolerance * (1 + L.f) || curvature >= 0) break;
    const double next = psi - d1 / curvature;
    const double fn = f(next);
    if (!(fn >= fpsi) || std::abs(next - psi) > h) break;
    const bool done = std::abs(next - psi) < 1e-15;
    psi = next, fpsi = fn;
    if (done) break;
  }
  psi = std::remainder(psi, 2 * std::numbers::pi);
  return {on_circle(psi), fpsi, curvature > -1e-8 * (1 + fpsi), it};
}

}  // namespace

double sum_of_norms(std::span<const NormTerm> terms, const BlochVector& m) {
  double f = 0;
  for (const auto& t : terms) f += (t.offset + t.map * m).norm();
  return f;
}

std::span<const BlochVector> lattice_directions(bool even) {
  static const std::array<BlochVector, 26> full = [] {
    std::array<BlochVector, 26> d;
    std::size_t k = 0;
    for (int axis = 0; axis < 3; ++axis)
      for (int s : {1, -1}) {
        BlochVector v = BlochVector::Zero();
        v(axis) = s;
        d[k++] = v;
      }
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b)
        for (int sa : {1, -1})
          for (int sb : {1, -1}) {
            BlochVector v = BlochVector::Zero();
            v(a) = sa, v(b) = sb;
            d[k++] = v.normalized();
          }
    for (int sx : {1, -1})
      for (int sy : {1, -1})
        for (int sz : {1, -1}) d[k++] = BlochVector(sx, sy, sz).normalized();
    return d;
  }();
  static const std::array<BlochVector, 13> half = [] {
    std::array<BlochVector, 13> d;
    std::size_t k = 0;
    for (const auto& v : full) {
      bool has_mirror = false;
      for (std::size_t j = 0; j < k; ++j) has_mirror |= (d[j] + v).norm() < 1e-12;
      if (!has_mirror) d[k++] = v;
    }
    return d;
  }();
  if (even) return half;
  return full;
}

SphereMax maximize_sum_of_norms(std::span<const NormTerm> terms, StateSpace mode,
                                const SphereOptOptions& options) {
  if (terms.empty()) throw std::invalid_argument("empty objective");
  if (mode == StateSpace::Planar2D) return maximize_planar(terms, options);

  SphereMax best;
  bool best_moved = true;
  bool have = false;
  int total = 0;
  // Ascend only from lattice points that are not beaten by a neighbour.
  const auto lattice = lattice_directions(false);
  std::array<double, 26> value;
  for (std::size_t i = 0; i < lattice.size(); ++i) value[i] = sum_of_norms(terms, lattice[i]);
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const BlochVector& start = lattice[i];
    if (options.even) {
      bool mirrored = false;
      for (std::size_t j = 0; j < i; ++j) mirrored |= (lattice[j] + start).norm() < 1e-12;
      if (mirrored) continue;
    }
    bool local_max = true;
    for (std::size_t j = 0; j < lattice.size() && local_max; ++j)
      if (j != i && lattice[j].dot(start) > 0.55 && value[j] > value[i] + 1e-13 * (1 + value[i]))
        local_max = false;
    if (!local_max) continue;
    const Ascent a = ascend_sphere(terms, start, options);
    total += a.iterations;
    const double tol = 1e-11 * (1 + std::abs(best.value));
    const bool better = !have || a.f > best.value + tol ||
                        (a.f > best.value - tol && best_moved && !a.moved);
    if (better) {
      best = {a.m, a.f, a.curvature > -1e-8 * (1 + a.f), 0};
      best_moved = a.moved;
      have = true;
    }
  }
  best.iterations = total;
  return best;
}

}  // namespace qse
