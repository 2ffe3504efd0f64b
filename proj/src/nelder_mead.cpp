#include "qse/nelder_mead.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace qse {

NelderMeadResult nelder_mead_minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                                      const Eigen::VectorXd& x0,
                                      const NelderMeadOptions& options) {
  const auto n = x0.size();
  const double dn = static_cast<double>(std::max<Eigen::Index>(n, 1));
  // Gao & Han adaptive parameters.
  const double alpha = 1, beta = 1 + 2 / dn, gamma = 0.75 - 1 / (2 * dn), delta = 1 - 1 / dn;

  std::vector<Eigen::VectorXd> x(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> fx(x.size());
  for (Eigen::Index i = 0; i < n; ++i) x[static_cast<std::size_t>(i + 1)](i) += options.initial_step;
  int evals = 0;
  auto eval = [&](const Eigen::VectorXd& p) {
    ++evals;
    return f(p);
  };
  for (std::size_t i = 0; i < x.size(); ++i) fx[i] = eval(x[i]);

  std::vector<std::size_t> order(x.size());
  bool converged = false;
  while (evals < options.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return fx[a] < fx[b]; });
    const std::size_t lo = order.front(), hi = order.back(), second = order[order.size() - 2];

    double spread = 0;
    for (const auto& p : x) spread = std::max(spread, (p - x[lo]).cwiseAbs().maxCoeff());
    if (fx[hi] - fx[lo] <= options.ftol * (1 + std::abs(fx[lo])) && spread <= options.xtol) {
      converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < x.size(); ++i)
      if (i != hi) centroid += x[i];
    centroid /= dn;

    const Eigen::VectorXd xr = centroid + alpha * (centroid - x[hi]);
    const double fr = eval(xr);
    if (fr < fx[lo]) {
      const Eigen::VectorXd xe = centroid + beta * (xr - centroid);
      const double fe = eval(xe);
      if (fe < fr) x[hi] = xe, fx[hi] = fe;
      else x[hi] = xr, fx[hi] = fr;
      continue;
    }
    if (fr < fx[second]) {
      x[hi] = xr, fx[hi] = fr;
      continue;
    }
    const bool outside = fr < fx[hi];
    const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + gamma * (xr - centroid))
                                       : Eigen::VectorXd(centroid - gamma * (centroid - x[hi]));
    const double fc = eval(xc);
    if (fc < (outside ? fr : fx[hi])) {
      x[hi] = xc, fx[hi] = fc;
      continue;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i == lo) continue;
      x[i] = x[lo] + delta * (x[i] - x[lo]);
      fx[i] = eval(x[i]);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(fx.begin(), fx.end()) - fx.begin());
  return {x[best], fx[best], evals, converged};
}

}  // namespace qse
