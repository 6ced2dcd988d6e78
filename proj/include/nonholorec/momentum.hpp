#pragma once

#include <functional>

#include "nonholorec/reduction.hpp"

namespace nonholorec {

// Discrete momentum -D1 L(q0, q1) xi_Q(q0), kept as a full covector together
// with the constrained algebra basis at q0 it is meant to be restricted to.
struct MomentumValue {
  AlgebraCovector value;
  Mat algebra_basis;  // d_G x s
  Vec restricted() const { return algebra_basis.transpose() * value.coords; }
};

MomentumValue momentum_map(const DiscreteSystem& sys, const BundlePoint& q0, const BundlePoint& q1);

// The same covector computed as D2 of the lifted lagrangian at w0 = form(q0, q1),
// translated back to the identity.
AlgebraCovector momentum_from_reduced(const ReducedSystem& red, const BundlePoint& q0, const BundlePoint& q1);

// A section of the constrained algebra bundle.
using AlgebraSection = std::function<AlgebraElement(const BundlePoint&)>;

// -D1 L(q_curr, q_next) xi_Q(q_curr) + D1 L(q_prev, q_curr) xi_Q(q_prev) with xi = section(q_curr).
double momentum_evolution_residual(const DiscreteSystem& sys, const BundlePoint& q_prev, const BundlePoint& q_curr,
                                   const BundlePoint& q_next, const AlgebraSection& section);

}  // namespace nonholorec
