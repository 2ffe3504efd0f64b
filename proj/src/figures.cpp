#include "qse/collective.hpp"
#include "qse/experiment.hpp"

namespace qse {

std::string_view to_string(Figure f) {
  switch (f) {
    case Figure::Fig1: return "fig1";
    case Figure::Fig2: return "fig2";
    case Figure::Fig3: return "fig3";
    case Figure::Fig4: return "fig4";
  }
  return "unknown";
}

Figure parse_figure(std::string_view text) {
  for (Figure f : {Figure::Fig1, Figure::Fig2, Figure::Fig3, Figure::Fig4})
    if (text == to_string(f)) return f;
  throw UsageError("unknown figure '" + std::string(text) + "'");
}

std::vector<int> figure_ladder(Figure f) {
  std::vector<int> Ns;
  switch (f) {
    case Figure::Fig1:
    case Figure::Fig2:
      for (int N = 10; N <= 60; N += 2) Ns.push_back(N);
      break;
    case Figure::Fig3:
      for (int N = 12; N <= 60; N += 3) Ns.push_back(N);
      break;
    case Figure::Fig4:
      for (int N = 30; N <= 240; N += 30) Ns.push_back(N);
      break;
  }
  return Ns;
}

std::vector<FigureRow> emit_figure_data(Figure figure, long trials, std::uint64_t seed, int workers) {
  const McConfig mc{trials, seed, workers};
  const bool planar = figure == Figure::Fig1 || figure == Figure::Fig2;
  const StateSpace mode = planar ? StateSpace::Planar2D : StateSpace::Full3D;
  const FixedKind tomo = planar ? FixedKind::Tomography2D : FixedKind::Tomography3D;

  std::vector<FigureRow> rows;
  auto add = [&](std::string curve, const FidelityResult& r) {
    rows.push_back({figure, std::move(curve), r.N, r.F, r.epsilonN, r.std_error, r.method,
                    r.method == Method::MonteCarlo ? r.trials : 0});
  };
  for (int N : figure_ladder(figure)) {
    const double collective = planar ? collective_bound_2d(N).F : fidelity_3d_collective(N).value();
    add("collective", FidelityResult::exact(N, collective, Method::ClosedForm));
    add("og", fixed_scheme_fidelity({tomo, N}, Estimator::OG, mc));
    if (figure == Figure::Fig4) {
      add("random", random_scheme_fidelity(N, mc));
      continue;
    }
    add("clg", fixed_scheme_fidelity({tomo, N}, Estimator::CLG, mc));
    add("greedy", greedy_run(N, mode, mc).result);
  }
  return rows;
}

}  // namespace qse
