#include "nonholorec/newton.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "nonholorec/error.hpp"

namespace nonholorec {

void SolverConfig::validate() const {
  if (!(residual_tolerance > 0.0)) throw ValidationError("residual tolerance must be positive");
  if (max_iterations < 1) throw ValidationError("max_iterations must be at least 1");
  if (!(jacobian_step > 0.0)) throw ValidationError("jacobian step must be positive");
}

Mat forward_difference_jacobian(const std::function<Vec(const Vec&)>& residual, const Vec& x, const Vec& fx,
                                const Vec& scale, double step) {
  Mat jac(fx.size(), x.size());
  for (int j = 0; j < x.size(); ++j) {
    Vec xp = x;
    // Taking the difference of the rounded argument makes h exactly representable.
    xp[j] += step * (1.0 + std::abs(scale[j] + x[j]));
    double h = xp[j] - x[j];
    jac.col(j) = (residual(xp) - fx) / h;
  }
  return jac;
}

NewtonResult solve_newton(const std::function<Vec(const Vec&)>& residual, const Vec& x0, const Vec& scale,
                          const SolverConfig& config) {
  config.validate();
  Vec x = x0;
  Vec fx = residual(x);
  if (fx.size() != x.size()) throw DimensionError("Newton system is not square");
  double norm = fx.norm();
  std::optional<Eigen::JacobiSVD<Mat>> last;

  for (int it = 0;; ++it) {
    if (!std::isfinite(norm)) throw NumericalError("Newton residual became non-finite");
    if (norm <= config.residual_tolerance) {
      if (config.polish && last) {
        // One more step with the last factorization costs a residual evaluation
        // and removes most of what is left below the tolerance.
        Vec trial = x + last->solve(-fx);
        Vec ftrial = residual(trial);
        if (ftrial.norm() <= norm) return {trial, it, ftrial.norm()};
      }
      return {x, it, norm};
    }
    if (it == config.max_iterations) {
      std::ostringstream msg;
      msg << "Newton did not converge in " << it << " iterations, residual " << norm;
      throw ConvergenceError(msg.str(), it, norm);
    }

    Mat jac = forward_difference_jacobian(residual, x, fx, scale, config.jacobian_step);
    Eigen::JacobiSVD<Mat> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vec& sigma = svd.singularValues();
    double smallest = sigma.size() ? sigma[sigma.size() - 1] : 0.0;
    if (sigma.size() == 0 || smallest == 0.0 || sigma[0] / smallest > config.singular_condition) {
      std::ostringstream msg;
      msg << "Newton Jacobian is singular (condition estimate "
          << (smallest == 0.0 ? INFINITY : sigma[0] / smallest) << ")";
      throw SingularJacobianError(msg.str(), it, norm);
    }
    Vec dx = svd.solve(-fx);
    last = std::move(svd);

    double t = 1.0;
    Vec trial = x + dx;
    Vec ftrial = residual(trial);
    for (int h = 0; h < config.max_halvings && !(ftrial.norm() < norm); ++h) {
      t *= 0.5;
      trial = x + t * dx;
      ftrial = residual(trial);
    }
    x = std::move(trial);
    fx = std::move(ftrial);
    norm = fx.norm();
  }
}

}  // namespace nonholorec
