// local_fixed.hpp
// Non-adaptive von Neumann schemes: tomography with frequency or Bayes
// guesses, equally spaced equatorial axes, and random axes.

#pragma once

#include "qse/core.hpp"
#include "qse/mc.hpp"

namespace qse {

struct AxisCounts {
  BlochVector axis = BlochVector::UnitX();
  int plus = 0;   // outcomes along +axis
  int total = 0;  // repetitions on this axis

  double alpha() const { return static_cast<double>(plus) / total; }
};

struct OutcomeCounts {
  std::vector<AxisCounts> perAxis;
};

enum class FixedKind { Tomography2D, Tomography3D, Isotropic2D, Random3D };
enum class Estimator { CLG, OG };

std::string_view to_string(FixedKind kind);
std::string_view to_string(Estimator rule);

struct FixedScheme {
  FixedKind kind = FixedKind::Tomography3D;
  int N = 3;

  StateSpace mode() const;
  int axis_count() const;  // 2 or 3 for tomography
  /// Repetitions per tomography axis; throws unless N divides evenly.
  int per_axis() const;
};

/// Probability of the given per-axis counts when the order of outcomes is
/// ignored: prod_i C(n_i, k_i) ((1+n.m_i)/2)^k_i ((1-n.m_i)/2)^(n_i-k_i).
double tomography_outcome_prob(const FixedScheme& scheme, const OutcomeCounts& counts,
                               const BlochVector& n);

/// Central-limit guess: sum_i (2 alpha_i - 1) m_i, normalized. Vanishing
/// frequencies give the tie-break axis, flagged degenerate.
Guess clg_guess(const OutcomeCounts& counts, StateSpace mode = StateSpace::Full3D);

/// Tomography axes: x, y (and z).
std::vector<BlochVector> tomography_axes(StateSpace mode);

/// Exact enumeration of count vectors when there are at most
/// kMaxEnumeratedStates of them, Monte Carlo otherwise.
inline constexpr double kMaxEnumeratedStates = 2e6;

enum class Evaluation { Auto, Exact, MonteCarlo };

FidelityResult fixed_scheme_fidelity(const FixedScheme& scheme, Estimator rule, const McConfig& mc = {},
                                     Evaluation how = Evaluation::Auto);

/// Equatorial axes at angles k pi / N, optimal guess.
FidelityResult isotropic_2d_fidelity(int N, const McConfig& mc = {}, Evaluation how = Evaluation::Auto);

/// Fresh isotropic random axes per trial, optimal guess.
FidelityResult random_scheme_fidelity(int N, const McConfig& mc);

}  // namespace qse
