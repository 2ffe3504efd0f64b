// qse: command-line front end for the estimation library.

#include "qse/asymptotics.hpp"
#include "qse/experiment.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace qse;

namespace {

constexpr int kUsage = 2;
constexpr int kNonConvergence = 3;

struct Globals {
  std::uint64_t seed = 1;
  int workers = 0;
  std::string out;
  std::string format = "csv";
  bool timing = false;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw std::runtime_error("cannot open " + g.out);
  f << text;
}

void write_policy(const std::string& path, const AdaptivePolicy& policy) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << policy.to_json().dump(2) << '\n';
}

int run_rows(const Globals& g, ExperimentSpec spec) {
  spec.mc.seed = g.seed;
  spec.mc.workers = g.workers;
  spec.format = g.format;
  spec.timing = g.timing;
  spec.out = g.out;
  const auto rows = run_experiment(spec);
  std::ostringstream os;
  if (g.format == "json")
    write_json(os, spec, rows);
  else
    write_csv(os, rows, g.timing);
  emit(g, os.str());
  for (const auto& r : rows)
    if (!r.converged) return kNonConvergence;
  return 0;
}

struct CheckRow {
  std::string quantity;
  double closed_form;
  double numeric;
};

std::vector<CheckRow> asymptotic_checks(const std::string& which, int N) {
  std::vector<CheckRow> rows;
  if (which == "traceHI") {
    rows.push_back({"mean tr(H I^-1) tomography 3D", -13.0 / 18, tomography_3d_mean_trace_hi()});
  } else if (which == "random-fisher") {
    const Eigen::Matrix2d I = fisher_random_3d();
    rows.push_back({"I_vv", 0.5, I(0, 0)});
    rows.push_back({"I_phiphi", 0.5, I(1, 1)});
    rows.push_back({"I_vphi", 0, I(0, 1)});
  } else if (which == "hessians") {
    for (double h : {1e-2, 1e-3}) {
      const std::string tag = " h=" + format_number(h);
      rows.push_back({"fd error theta chart" + tag, 0,
                      finite_diff_hessian_check(StateSpace::Full3D, {0.9, 0.4, Chart::Theta}, h)});
      rows.push_back({"fd error cos-theta chart" + tag, 0,
                      finite_diff_hessian_check(StateSpace::Full3D, {0.3, 0.4, Chart::CosTheta}, h)});
      rows.push_back({"fd error planar" + tag, 0,
                      finite_diff_hessian_check(StateSpace::Planar2D, {0.9, 0, Chart::Theta}, h)});
    }
  } else if (which == "cr-bounds") {
    const Eigen::MatrixXd one = Eigen::MatrixXd::Identity(1, 1);
    rows.push_back({"F von Neumann 2D", 1 - 1.0 / (4 * N),
                    cramer_rao_fidelity(one * fisher_2d_von_neumann(0.0, 0.0),
                                        hessian_fidelity(StateSpace::Planar2D, {}), N)});
    rows.push_back({"F random 3D", 1 - 1.0 / N,
                    cramer_rao_fidelity(fisher_random_3d(),
                                        hessian_fidelity(StateSpace::Full3D, {0, 0, Chart::CosTheta}), N)});
    rows.push_back({"F tomography 3D", 1 - 13.0 / (12 * N), 1 + 3 * tomography_3d_mean_trace_hi() / (2.0 * N)});
  } else {
    throw UsageError("unknown check '" + which + "'");
  }
  return rows;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Qubit pure-state estimation from N copies"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Monte Carlo seed");
  app.add_option("--workers", g.workers, "Worker threads (0: QSE_WORKERS or all cores)");
  app.add_option("--out", g.out, "Output file (default stdout)");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--timing", g.timing, "Add wall-clock times to the output");

  std::vector<int> Ns;
  long trials = 10000;
  std::string mode = "3d";
  std::string eval = "auto";

  auto* bounds = app.add_subcommand("bounds", "Collective-measurement fidelity bounds");
  bounds->add_option("--n", Ns, "Copy counts")->required();
  bounds->add_option("--mode", mode)->check(CLI::IsMember({"2d", "3d"}));

  auto* simulate = app.add_subcommand("simulate", "Fixed local schemes");
  std::string scheme = "tomo3d", rule = "og";
  simulate->add_option("--scheme", scheme)->check(CLI::IsMember({"tomo2d", "tomo3d", "iso2d", "rand3d"}));
  simulate->add_option("--rule", rule)->check(CLI::IsMember({"clg", "og"}));
  simulate->add_option("--n", Ns, "Copy counts")->required();
  simulate->add_option("--trials", trials);
  simulate->add_option("--eval", eval, "auto, exact or mc")->check(CLI::IsMember({"auto", "exact", "mc"}));

  auto* greedy = app.add_subcommand("greedy", "Greedy adaptive scheme");
  std::string policy_out;
  greedy->add_option("--n", Ns, "Copy counts")->required();
  greedy->add_option("--mode", mode)->check(CLI::IsMember({"2d", "3d"}));
  greedy->add_option("--trials", trials, "Trials when the tree is too deep to enumerate");
  greedy->add_option("--policy", policy_out, "Write the policy of the last N as JSON");

  auto* locc = app.add_subcommand("locc-opt", "Optimal adaptive von Neumann tree");
  LoccOptions locc_opt;
  locc->add_option("--n", Ns, "Copy counts (1..8)")->required();
  locc->add_option("--mode", mode)->check(CLI::IsMember({"2d", "3d"}));
  locc->add_option("--restarts", locc_opt.restarts);
  locc->add_option("--locc-seed", locc_opt.seed, "Restart seed (default: --seed)");
  locc->add_option("--policy", policy_out, "Write the policy of the last N as JSON");

  auto* osa = app.add_subcommand("osa", "One-step adaptive scheme");
  OneStepOptions osa_opt;
  osa->add_option("--n", Ns, "Copy counts")->required();
  osa->add_option("--mode", mode)->check(CLI::IsMember({"2d", "3d"}));
  osa->add_option("--a", osa_opt.a, "Stage-one exponent");
  osa->add_option("--lambda", osa_opt.lambda, "Tilt gain");
  osa->add_option("--trials", trials);

  auto* asym = app.add_subcommand("asymptotics", "Fisher-information constants");
  std::string check = "traceHI";
  int cr_n = 100;
  asym->add_option("--check", check)->check(CLI::IsMember({"traceHI", "random-fisher", "hessians", "cr-bounds"}));
  asym->add_option("--n", cr_n, "Copy count for cr-bounds");

  auto* figure = app.add_subcommand("figure", "Figure data as long-format CSV");
  std::string fig = "fig1";
  figure->add_option("--id", fig)->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4"}));
  figure->add_option("--trials", trials);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    ExperimentSpec spec;
    spec.Ns = Ns;
    spec.mc.trials = trials;
    if (bounds->parsed()) {
      spec.scheme = "collective" + mode;
      return run_rows(g, spec);
    }
    if (simulate->parsed()) {
      spec.scheme = scheme;
      spec.rule = rule == "clg" ? Estimator::CLG : Estimator::OG;
      spec.evaluation = eval == "exact" ? Evaluation::Exact : eval == "mc" ? Evaluation::MonteCarlo : Evaluation::Auto;
      return run_rows(g, spec);
    }
    if (greedy->parsed()) {
      spec.scheme = "greedy" + mode;
      const int code = run_rows(g, spec);
      if (!policy_out.empty()) {
        if (Ns.back() > kExactTreeDepth) throw UsageError("policy export needs N <= 20");
        write_policy(policy_out, greedy_policy(Ns.back(), parse_state_space(mode), g.workers));
      }
      return code;
    }
    if (locc->parsed()) {
      spec.scheme = "locc" + mode;
      if (locc->count("--locc-seed") == 0) locc_opt.seed = g.seed;
      spec.locc = locc_opt;
      const int code = run_rows(g, spec);
      if (!policy_out.empty()) {
        LoccOptions o = locc_opt;
        o.workers = g.workers;
        write_policy(policy_out, locc_optimize(Ns.back(), parse_state_space(mode), o).policy);
      }
      return code;
    }
    if (osa->parsed()) {
      spec.scheme = "osa" + mode;
      spec.one_step = osa_opt;
      return run_rows(g, spec);
    }
    if (asym->parsed()) {
      const auto rows = asymptotic_checks(check, cr_n);
      std::ostringstream os;
      if (g.format == "json") {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : rows)
          j.push_back({{"quantity", r.quantity}, {"closed_form", r.closed_form}, {"numeric", r.numeric}});
        os << nlohmann::json{{"version", QSE_VERSION}, {"check", check}, {"results", j}}.dump(2) << '\n';
      } else {
        os << "quantity,closed_form,numeric,abs_error\n";
        for (const auto& r : rows)
          os << r.quantity << ',' << format_number(r.closed_form) << ',' << format_number(r.numeric) << ','
             << format_number(std::abs(r.numeric - r.closed_form)) << '\n';
      }
      emit(g, os.str());
      return 0;
    }
    if (figure->parsed()) {
      if (trials < 2) throw UsageError("need at least two trials");
      std::ostringstream os;
      write_figure_csv(os, emit_figure_data(parse_figure(fig), trials, g.seed, g.workers));
      emit(g, os.str());
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kUsage;
}
