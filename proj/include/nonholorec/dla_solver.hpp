#pragma once

#include <optional>
#include <vector>

#include "nonholorec/newton.hpp"
#include "nonholorec/system.hpp"

namespace nonholorec {

struct StepResult {
  BundlePoint q_next;
  Vec multipliers;
  int iterations = 0;
  double residual_norm = 0.0;
};

// Solves D1 L(q_curr, q_next) + D2 L(q_prev, q_curr) + f-(q_curr, q_next) + f+(q_prev, q_curr)
//        = sum_a lambda_a omega^a(q_curr),   chi(q_curr, q_next) = 0
// for (q_next, lambda). The default guess extrapolates q_curr + (q_curr - q_prev).
// Existence is only local: keep successive points close (|increment| ~ 0.1 in the
// examples) and expect ConvergenceError otherwise.
StepResult dla_step(const DiscreteSystem& sys, const BundlePoint& q_prev, const BundlePoint& q_curr,
                    const SolverConfig& config = {}, const std::optional<BundlePoint>& guess = std::nullopt);

struct Trajectory {
  DiscreteCurve curve;
  // multipliers[k - 1] belongs to the interior point q_k, k = 1..N-1.
  std::vector<Vec> multipliers;
  std::vector<int> iterations;
};

// Initial pairs are accepted when every constraint level is below this value.
inline constexpr double kInitialConstraintTolerance = 1e-10;

Trajectory dla_trajectory(const DiscreteSystem& sys, const BundlePoint& q0, const BundlePoint& q1, int steps,
                          const SolverConfig& config = {});

// Force-balance covector D1 L(q_curr, q_next) + D2 L(q_prev, q_curr) + forces, at q_curr.
Vec force_balance(const DiscreteSystem& sys, const BundlePoint& q_prev, const BundlePoint& q_curr,
                  const BundlePoint& q_next);

struct DlaResidual {
  Vec projected;   // force balance paired with distribution_basis(q_curr)
  Vec constraint;  // chi(q_curr, q_next)
  double max() const;
};

DlaResidual dla_residual(const DiscreteSystem& sys, const BundlePoint& q_prev, const BundlePoint& q_curr,
                         const BundlePoint& q_next);

// Largest dla_residual entry over all interior points of a curve.
double max_dla_residual(const DiscreteSystem& sys, const DiscreteCurve& curve);

}  // namespace nonholorec
