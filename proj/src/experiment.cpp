#include "qse/experiment.hpp"

#include "qse/collective.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <iostream>

namespace qse {

namespace {

constexpr std::array<std::string_view, 12> kSchemes{"collective2d", "collective3d", "tomo2d", "tomo3d",
                                                    "iso2d",        "rand3d",       "greedy2d", "greedy3d",
                                                    "locc2d",       "locc3d",       "osa2d",    "osa3d"};

StateSpace mode_of(std::string_view scheme) {
  return scheme.ends_with("2d") ? StateSpace::Planar2D : StateSpace::Full3D;
}

ResultRow row_from(const std::string& scheme, std::string rule, const FidelityResult& r, std::uint64_t seed) {
  ResultRow row;
  row.scheme = scheme;
  row.N = r.N;
  row.rule = std::move(rule);
  row.F = r.F;
  row.delta = r.delta;
  row.epsilonN = r.epsilonN;
  row.stderr_of_mean = r.std_error;
  row.method = r.method;
  row.trials = r.method == Method::MonteCarlo ? r.trials : 0;
  row.seed = r.method == Method::MonteCarlo ? seed : 0;
  return row;
}

ResultRow run_one(const ExperimentSpec& spec, int N, const std::function<void(const std::string&)>& warn) {
  const std::string& s = spec.scheme;
  const StateSpace mode = mode_of(s);
  const std::string tag = s + " N=" + std::to_string(N);

  if (s.starts_with("collective")) {
    if (mode == StateSpace::Planar2D) {
      const CollectiveBound b = collective_bound_2d(N);
      FidelityResult r = FidelityResult::exact(N, b.F, Method::ClosedForm);
      r.delta = b.deltaMax;
      return row_from(s, "-", r, 0);
    }
    return row_from(s, "-", FidelityResult::exact(N, fidelity_3d_collective(N).value(), Method::ClosedForm), 0);
  }

  if (s == "tomo2d" || s == "tomo3d" || s == "iso2d" || s == "rand3d") {
    const FixedKind kind = s == "tomo2d"   ? FixedKind::Tomography2D
                           : s == "tomo3d" ? FixedKind::Tomography3D
                           : s == "iso2d"  ? FixedKind::Isotropic2D
                                           : FixedKind::Random3D;
    const FixedScheme scheme{kind, N};
    if ((kind == FixedKind::Isotropic2D || kind == FixedKind::Random3D) && spec.rule != Estimator::OG)
      throw UsageError(s + " uses the optimal guess; pass --rule og");
    if (kind == FixedKind::Tomography2D || kind == FixedKind::Tomography3D) {
      if (N % scheme.axis_count() != 0)
        throw UsageError(tag + ": N must be divisible by " + std::to_string(scheme.axis_count()));
    }
    Evaluation how = spec.evaluation;
    if (how == Evaluation::Exact) {
      bool feasible = kind != FixedKind::Random3D;
      if (kind == FixedKind::Isotropic2D) feasible = N <= kExactTreeDepth;
      if (kind == FixedKind::Tomography2D || kind == FixedKind::Tomography3D)
        feasible = std::pow(scheme.per_axis() + 1.0, scheme.axis_count()) <= kMaxEnumeratedStates;
      if (!feasible) {
        warn(tag + ": exact enumeration infeasible, falling back to Monte Carlo");
        how = Evaluation::MonteCarlo;
      }
    }
    return row_from(s, std::string(to_string(spec.rule)), fixed_scheme_fidelity(scheme, spec.rule, spec.mc, how),
                    spec.mc.seed);
  }

  if (s.starts_with("greedy")) {
    if (N > kExactTreeDepth && spec.evaluation == Evaluation::Exact)
      warn(tag + ": exact enumeration infeasible, falling back to Monte Carlo");
    return row_from(s, "og", greedy_run(N, mode, spec.mc).result, spec.mc.seed);
  }

  if (s.starts_with("locc")) {
    if (N > 8) throw UsageError(tag + ": LOCC optimization supports N <= 8");
    LoccOptions opt = spec.locc;
    if (opt.workers == 0) opt.workers = spec.mc.workers;
    const LoccSolution sol = locc_optimize(N, mode, opt);
    ResultRow row = row_from(s, "og", FidelityResult::exact(N, sol.F, Method::ExactEnumeration), 0);
    row.seed = opt.seed;
    row.converged = sol.converged;
    if (!sol.converged) warn(tag + ": block-coordinate ascent hit the sweep limit");
    return row;
  }

  if (s.starts_with("osa")) {
    if (!(spec.one_step.a > 0 && spec.one_step.a < 1)) throw UsageError("osa needs 0 < a < 1");
    return row_from(s, "-", one_step_adaptive(N, mode, spec.one_step, spec.mc), spec.mc.seed);
  }

  throw UsageError("unknown scheme '" + s + "'");
}

}  // namespace

std::span<const std::string_view> scheme_names() { return kSchemes; }

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  if (std::find(kSchemes.begin(), kSchemes.end(), spec.scheme) == kSchemes.end())
    throw UsageError("unknown scheme '" + spec.scheme + "'");
  if (spec.Ns.empty()) throw UsageError("no copy counts given");
  if (spec.mc.trials < 2) throw UsageError("need at least two trials");
  if (spec.format != "csv" && spec.format != "json") throw UsageError("format must be csv or json");
  const auto warn = spec.warn ? spec.warn : [](const std::string& m) { std::cerr << "warning: " << m << '\n'; };

  std::vector<ResultRow> rows;
  for (int N : spec.Ns) {
    if (N < 1) throw UsageError("copy counts must be positive");
    const auto t0 = std::chrono::steady_clock::now();
    ResultRow row;
    try {
      row = run_one(spec, N, warn);
    } catch (const UsageError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    row.wallTimeMs = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qse
