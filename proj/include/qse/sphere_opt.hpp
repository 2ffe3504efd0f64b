// sphere_opt.hpp
// Maximization of sum_l |a_l + B_l m| over unit vectors m. The greedy step,
// per-axis LOCC updates and the last-step POVM search all reduce to it.

#pragma once

#include "qse/core.hpp"

#include <span>

namespace qse {

struct NormTerm {
  BlochVector offset = BlochVector::Zero();
  Matrix3 map = Matrix3::Zero();
};

struct SphereMax {
  BlochVector axis = BlochVector::UnitX();
  double value = 0;
  /// The maximum is not isolated: the Hessian has a flat direction.
  bool degenerate = false;
  int iterations = 0;
};

struct SphereOptOptions {
  /// Objective is invariant under m -> -m; search one hemisphere only.
  bool even = false;
  double tolerance = 1e-12;
  int max_iterations = 100;
};

double sum_of_norms(std::span<const NormTerm> terms, const BlochVector& m);

/// Global search: 26 lattice starts (13 when even) in 3D with Riemannian
/// Newton ascent, or a 64-point angle grid with golden-section and Newton
/// polish on the equator. Among equal maxima the earliest start that was
/// already stationary wins, so symmetric problems resolve to x, y, z first.
SphereMax maximize_sum_of_norms(std::span<const NormTerm> terms, StateSpace mode,
                                const SphereOptOptions& options = {});

/// Lattice directions: +-x, +-y, +-z, then the 12 edge and 8 corner
/// directions of the cube, normalized.
std::span<const BlochVector> lattice_directions(bool even);

}  // namespace qse
