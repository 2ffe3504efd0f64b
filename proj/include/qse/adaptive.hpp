// adaptive.hpp
// Outcome-dependent von Neumann schemes: greedy step-optimal policies,
// fully optimized LOCC trees, the two-stage one-step scheme and the
// general last-step POVM search.

#pragma once

#include "qse/core.hpp"
#include "qse/mc.hpp"
#include "qse/posterior.hpp"
#include "qse/sphere_opt.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>

namespace qse {

/// Measurement axes indexed by outcome prefix. axes[k][c] is the axis of
/// measurement k+1 after the k outcomes encoded in c (bit j = outcome j+1,
/// 0 for the +axis projector). Outcome 1 projects on the opposite axis.
struct AdaptivePolicy {
  int N = 0;
  StateSpace mode = StateSpace::Full3D;
  std::vector<std::vector<BlochVector>> axes;

  static AdaptivePolicy uniform(int N, StateSpace mode, const BlochVector& axis);

  const BlochVector& axis(const OutcomeString& prefix) const;
  /// Axis with outcome sign applied: (-1)^i m.
  BlochVector signed_axis(int step, std::uint64_t code) const;
  std::size_t parameter_count() const;

  /// {"N":..,"mode":..,"axes":{"<outcome string>":[x,y,z],...}}; the empty
  /// string keys the first axis.
  nlohmann::json to_json() const;
  static AdaptivePolicy from_json(const nlohmann::json& j);
};

inline int outcome_sign(std::uint64_t code, int step) { return ((code >> step) & 1U) ? -1 : 1; }

struct PolicyEvaluation {
  double F = 0;
  double delta = 0;
  double degenerate_mass = 0;
  /// |V(chi)| for every leaf, indexed by outcome code.
  std::vector<double> leaf_moduli;
};

/// Exact F = (1 + sum |V(chi)|)/2 over all 2^N records.
PolicyEvaluation evaluate_policy(const AdaptivePolicy& policy, int workers = 1);

/// argmax |V + A m| + |V - A m| over admissible unit m; the full result
/// carries the tie flag.
SphereMax greedy_step(const PosteriorSummary& post, StateSpace mode);
BlochVector greedy_next_axis(const PosteriorSummary& post, StateSpace mode);

inline constexpr int kExactTreeDepth = 20;

struct GreedyRun {
  std::optional<AdaptivePolicy> policy;  // only for exact runs
  FidelityResult result;
};

/// Exact enumeration for N <= kExactTreeDepth, otherwise Monte Carlo with
/// the policy computed on the fly.
GreedyRun greedy_run(int N, StateSpace mode, const McConfig& mc = {});

AdaptivePolicy greedy_policy(int N, StateSpace mode, int workers = 1);

struct LoccAngles {
  double alpha = 0;
  double beta = 0;
  double gamma = 0;
};

struct LoccTrace {
  int sweeps = 0;
  int restarts = 0;
  int improved_restarts = 0;
  double greedy_F = 0;
  double best_F = 0;
};

struct LoccSolution {
  AdaptivePolicy policy;
  double F = 0;
  std::optional<LoccAngles> angles;  // N = 4, 3D only
  LoccTrace trace;
  bool converged = false;
};

struct LoccOptions {
  int restarts = 32;
  std::uint64_t seed = 1;
  double perturbation = 0.35;  // radians
  int max_sweeps = 500;
  int workers = 0;
};

/// Block-coordinate ascent over every axis of the tree, warm started from
/// the greedy policy. Each block update is an exact sphere maximization since
/// every leaf moment is affine in one node's axis. Restarts perturb the best
/// policy found so far.
LoccSolution locc_optimize(int N, StateSpace mode, const LoccOptions& options = {});

/// Fits the three-angle description of a four-step 3D tree. alpha: tilt of
/// the third axis out of the plane of the first two; gamma, beta: polar and
/// azimuthal angles of the fourth axis in the frame (m1+m2, m3, s x m3).
LoccAngles fit_locc_angles(const AdaptivePolicy& policy);

struct OneStepOptions {
  double a = 0.5;
  double lambda = 1;
};

/// Stage 1: floor(N^a) copies split evenly over the tomography axes,
/// central-limit guess M0. Stage 2: remaining copies along directions
/// orthogonal to M0, final guess tilted by omega = lambda |r| towards the
/// observed frequencies.
FidelityResult one_step_adaptive(int N, StateSpace mode, const OneStepOptions& options,
                                 const McConfig& mc);

struct PovmElement {
  double weight = 0;
  BlochVector axis = BlochVector::UnitX();
};

struct GeneralPovmStep {
  std::vector<PovmElement> elements;
  double delta = 0;  // sum_r |c_r V + A c_r m_r|
  std::size_t support() const;
  /// max(|sum c - 1|, |sum c m|)
  double feasibility_defect() const;
};

/// Best R-element rank-one qubit POVM {c_r (1 + m_r.sigma)} as the final
/// measurement on a posterior.
GeneralPovmStep optimize_last_step_povm(const PosteriorSummary& post, int R, int restarts,
                                        std::uint64_t seed, StateSpace mode = StateSpace::Full3D);

}  // namespace qse
