// collective.hpp
// Optimal joint-measurement bounds on N identical copies and checks of the
// POVMs that reach them.

#pragma once

#include "qse/core.hpp"

#include <optional>

namespace qse {

/// A value in (1/2)Z, stored as twice its value.
struct HalfInteger {
  int twice = 0;

  static HalfInteger from_twice(int t) { return {t}; }
  double value() const { return twice / 2.0; }
  friend bool operator==(HalfInteger, HalfInteger) = default;
};

struct CollectiveBound {
  int N = 0;
  double J = 0;
  int dJ = 0;
  double deltaMax = 0;
  double F = 0;
};

/// Largest achievable sum of |V| for equatorial states:
/// 2^-N sum_k sqrt(C(N,k) C(N,k+1)).
double delta_2d_max(int N);

/// (N+1)/(N+2).
Rational fidelity_3d_collective(int N);

CollectiveBound collective_bound_2d(int N);
CollectiveBound collective_bound_3d(int N);

/// Best phase-estimation fidelity with an arbitrary d-dimensional fiducial
/// state: (1 + lambda_max)/2 where lambda_max = cos(pi/(d+1)) is the top
/// eigenvalue of the half-adjacency matrix of a d-site path.
double phase_fidelity_general_fiducial(int d);

/// |<J m| U(n) |J J>|^2 = C(2J, J+m) cos^{2(J+m)}(theta/2) sin^{2(J-m)}(theta/2).
double rotation_amplitude_sq(HalfInteger J, HalfInteger m, const BlochVector& n);

struct CovariantPovmSpec2D {
  int N = 1;
  /// Number of equally spaced phases 2 pi k/K; empty for the continuous POVM.
  std::optional<int> finite_outcomes;
};

struct PovmReport {
  double completeness_defect = 0;  // max |sum O - 1| over matrix elements
  double delta = 0;                // achieved sum of |V|
};

/// Checks O_mn = e^{i(m-n)phi} against identity resolution and evaluates
/// the achieved Delta on the product fiducial state |x>^N.
PovmReport verify_povm_2d(const CovariantPovmSpec2D& spec);

/// Checks O(m) = d_J U(m)|JJ><JJ|U(m)^dagger on a sphere product rule of
/// the given degree (0 picks the smallest exact one).
PovmReport verify_povm_3d(int N, int quadrature_degree = 0);

}  // namespace qse
