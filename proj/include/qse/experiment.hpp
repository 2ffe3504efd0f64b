// experiment.hpp
// Scheme dispatch, figure ladders and CSV / JSON output.

#pragma once

#include "qse/adaptive.hpp"
#include "qse/local_fixed.hpp"

#include <functional>
#include <iosfwd>
#include <stdexcept>

namespace qse {

/// Bad scheme names, copy counts or options. The CLI maps it to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Scheme ids accepted by run_experiment.
std::span<const std::string_view> scheme_names();

struct ExperimentSpec {
  std::string scheme = "collective3d";
  std::vector<int> Ns;
  Estimator rule = Estimator::OG;
  McConfig mc;
  Evaluation evaluation = Evaluation::Auto;
  OneStepOptions one_step;
  LoccOptions locc;
  std::string out;            // empty: stdout
  std::string format = "csv";  // csv | json
  bool timing = false;         // wallTimeMs breaks byte-identical output
  /// Receives fallback notices; defaults to standard error.
  std::function<void(const std::string&)> warn;
};

struct ResultRow {
  std::string scheme;
  int N = 0;
  std::string rule;  // clg, og, or "-" where the guess is fixed by the scheme
  double F = 0;
  double delta = 0;
  double epsilonN = 0;
  double stderr_of_mean = 0;
  Method method = Method::ClosedForm;
  long trials = 0;
  std::uint64_t seed = 0;
  double wallTimeMs = 0;
  bool converged = true;
};

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

enum class Figure { Fig1, Fig2, Fig3, Fig4 };

std::string_view to_string(Figure f);
Figure parse_figure(std::string_view text);

struct FigureRow {
  Figure figure = Figure::Fig1;
  std::string curve;
  int N = 0;
  double F = 0;
  double epsilonN = 0;
  double stderr_of_mean = 0;
  Method method = Method::ClosedForm;
  long trials = 0;
};

/// Copy counts on each figure's horizontal axis.
std::vector<int> figure_ladder(Figure f);

/// One row per (N, curve). Fig1/Fig2: 2D collective, og, clg, greedy.
/// Fig3: the same in 3D. Fig4: 3D random against og and collective.
std::vector<FigureRow> emit_figure_data(Figure figure, long trials, std::uint64_t seed, int workers = 0);

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows, bool timing = false);
void write_json(std::ostream& os, const ExperimentSpec& spec, const std::vector<ResultRow>& rows);
void write_figure_csv(std::ostream& os, const std::vector<FigureRow>& rows);

/// Twelve significant digits, the precision of every CSV field.
std::string format_number(double x);

}  // namespace qse
