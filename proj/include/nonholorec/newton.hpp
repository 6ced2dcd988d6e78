#pragma once

#include <functional>

#include "nonholorec/lie_group.hpp"

namespace nonholorec {

struct SolverConfig {
  double residual_tolerance = 1e-12;
  int max_iterations = 50;
  // Forward-difference Jacobian step, scaled by (1 + |x|).
  double jacobian_step = 1e-7;
  double singular_condition = 1e14;
  int max_halvings = 8;
  // After convergence, one extra step with the last Jacobian.
  bool polish = true;

  void validate() const;
};

struct NewtonResult {
  Vec x;
  int iterations = 0;
  double residual_norm = 0.0;
};

// Damped Newton on residual(x) = 0 with a forward-difference Jacobian.
// `scale` holds the magnitudes used for the difference steps; callers that
// solve for an increment pass the absolute coordinates it is added to.
NewtonResult solve_newton(const std::function<Vec(const Vec&)>& residual, const Vec& x0, const Vec& scale,
                          const SolverConfig& config);

Mat forward_difference_jacobian(const std::function<Vec(const Vec&)>& residual, const Vec& x, const Vec& fx,
                                const Vec& scale, double step);

}  // namespace nonholorec
