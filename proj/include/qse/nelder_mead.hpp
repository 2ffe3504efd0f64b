// nelder_mead.hpp
// Derivative-free simplex minimization with dimension-adapted coefficients.

#pragma once

#include <Eigen/Dense>

#include <functional>

namespace qse {

struct NelderMeadOptions {
  double initial_step = 0.1;
  double ftol = 1e-13;
  double xtol = 1e-10;
  int max_evaluations = 20000;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0;
  int evaluations = 0;
  bool converged = false;
};

NelderMeadResult nelder_mead_minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                                      const Eigen::VectorXd& x0,
                                      const NelderMeadOptions& options = {});

}  // namespace qse
