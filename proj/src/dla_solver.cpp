#include "nonholorec/dla_solver.hpp"

#include <algorithm>
#include <sstream>

#include "nonholorec/error.hpp"
#include "nonholorec/linalg.hpp"

namespace nonholorec {

StepResult dla_step(const DiscreteSystem& sys, const BundlePoint& q_prev, const BundlePoint& q_curr,
                    const SolverConfig& config, const std::optional<BundlePoint>& guess) {
  const BundleSpec& b = sys.bundle();
  const int n = b.dim();
  const int m = sys.constraint_count();

  BundlePoint start = guess ? *guess : b.advance(q_curr, b.difference(q_prev, q_curr));
  b.check(start);

  // Everything attached to q_prev and q_curr is fixed during the solve.
  const Mat omega = sys.annihilator_basis(q_curr);
  const Vec fixed = sys.lagrangian_gradient(q_prev, q_curr).d2 + sys.force_plus(q_prev, q_curr);

  auto residual = [&](const Vec& z) {
    BundlePoint q_next = b.advance(start, z.head(n));
    Vec out(n + m);
    Vec balance = fixed + sys.lagrangian_gradient(q_curr, q_next).d1 + sys.force_minus(q_curr, q_next);
    if (m > 0) balance -= omega.transpose() * z.tail(m);
    out.head(n) = balance;
    out.tail(m) = sys.constraint_residual(q_curr, q_next);
    return out;
  };

  Vec scale = Vec::Zero(n + m);
  scale.head(n) = b.coords(start);
  NewtonResult sol = solve_newton(residual, Vec::Zero(n + m), scale, config);
  return {b.advance(start, sol.x.head(n)), sol.x.tail(m), sol.iterations, sol.residual_norm};
}

Trajectory dla_trajectory(const DiscreteSystem& sys, const BundlePoint& q0, const BundlePoint& q1, int steps,
                          const SolverConfig& config) {
  if (steps < 0) throw ValidationError("step count must be non-negative");
  Trajectory out;
  out.curve.push_back(q0);
  if (steps == 0) return out;

  double chi = max_abs(sys.constraint_residual(q0, q1));
  if (chi > std::max(kInitialConstraintTolerance, config.residual_tolerance)) {
    std::ostringstream msg;
    msg << "initial pair violates the kinematic constraints (residual " << chi << ")";
    throw ValidationError(msg.str(), chi);
  }
  out.curve.push_back(q1);

  for (int k = 1; k < steps; ++k) {
    try {
      StepResult step = dla_step(sys, out.curve[k - 1], out.curve[k], config);
      out.curve.push_back(std::move(step.q_next));
      out.multipliers.push_back(std::move(step.multipliers));
      out.iterations.push_back(step.iterations);
    } catch (const SingularJacobianError& e) {
      throw SingularJacobianError("step " + std::to_string(k) + ": " + e.what(), e.iterations(), e.residual(), k);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("step " + std::to_string(k) + ": " + e.what(), e.iterations(), e.residual(), k);
    }
  }
  return out;
}

Vec force_balance(const DiscreteSystem& sys, const BundlePoint& q_prev, const BundlePoint& q_curr,
                  const BundlePoint& q_next) {
  return sys.lagrangian_gradient(q_curr, q_next).d1 + sys.lagrangian_gradient(q_prev, q_curr).d2 +
         sys.force_minus(q_curr, q_next) + sys.force_plus(q_prev, q_curr);
}

double DlaResidual::max() const { return std::max(max_abs(projected), max_abs(constraint)); }

DlaResidual dla_residual(const DiscreteSystem& sys, const BundlePoint& q_prev, const BundlePoint& q_curr,
                         const BundlePoint& q_next) {
  Vec balance = force_balance(sys, q_prev, q_curr, q_next);
  return {sys.distribution_basis(q_curr).transpose() * balance, sys.constraint_residual(q_curr, q_next)};
}

double max_dla_residual(const DiscreteSystem& sys, const DiscreteCurve& curve) {
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < curve.size(); ++k) {
    worst = std::max(worst, dla_residual(sys, curve[k - 1], curve[k], curve[k + 1]).max());
  }
  return worst;
}

}  // namespace nonholorec
