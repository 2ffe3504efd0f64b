#include "qse/experiment.hpp"

#include <json.hpp>

#include <cstdio>
#include <ostream>

namespace qse {

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows, bool timing) {
  os << "scheme,N,rule,F,delta,epsilonN,stderr,method,trials,seed";
  if (timing) os << ",wallTimeMs";
  os << '\n';
  for (const auto& r : rows) {
    os << r.scheme << ',' << r.N << ',' << r.rule << ',' << format_number(r.F) << ',' << format_number(r.delta)
       << ',' << format_number(r.epsilonN) << ',' << format_number(r.stderr_of_mean) << ',' << to_string(r.method)
       << ',' << r.trials << ',' << r.seed;
    if (timing) os << ',' << format_number(r.wallTimeMs);
    os << '\n';
  }
}

void write_json(std::ostream& os, const ExperimentSpec& spec, const std::vector<ResultRow>& rows) {
  using nlohmann::json;
  json s = {{"scheme", spec.scheme},
            {"N", spec.Ns},
            {"rule", to_string(spec.rule)},
            {"trials", spec.mc.trials},
            {"seed", spec.mc.seed}};
  s["evaluation"] = spec.evaluation == Evaluation::Exact         ? "exact"
                    : spec.evaluation == Evaluation::MonteCarlo ? "mc"
                                                                 : "auto";
  if (spec.scheme.starts_with("osa")) s["osa"] = {{"a", spec.one_step.a}, {"lambda", spec.one_step.lambda}};
  if (spec.scheme.starts_with("locc"))
    s["locc"] = {{"restarts", spec.locc.restarts},
                 {"seed", spec.locc.seed},
                 {"perturbation", spec.locc.perturbation},
                 {"max_sweeps", spec.locc.max_sweeps}};
  json results = json::array();
  for (const auto& r : rows) {
    json j = {{"scheme", r.scheme},   {"N", r.N},
              {"rule", r.rule},       {"F", r.F},
              {"delta", r.delta},     {"epsilonN", r.epsilonN},
              {"stderr", r.stderr_of_mean}, {"method", to_string(r.method)},
              {"trials", r.trials},   {"seed", r.seed},
              {"converged", r.converged}};
    if (spec.timing) j["wallTimeMs"] = r.wallTimeMs;
    results.push_back(std::move(j));
  }
  const json doc = {{"version", QSE_VERSION}, {"seed", spec.mc.seed}, {"spec", s}, {"results", results}};
  os << doc.dump(2) << '\n';
}

void write_figure_csv(std::ostream& os, const std::vector<FigureRow>& rows) {
  os << "figure,curve,N,F,epsilonN,stderr,method,trials\n";
  for (const auto& r : rows)
    os << to_string(r.figure) << ',' << r.curve << ',' << r.N << ',' << format_number(r.F) << ','
       << format_number(r.epsilonN) << ',' << format_number(r.stderr_of_mean) << ',' << to_string(r.method) << ','
       << r.trials << '\n';
}

}  // namespace qse
