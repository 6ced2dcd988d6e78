#include "nonholorec/momentum.hpp"

namespace nonholorec {

MomentumValue momentum_map(const DiscreteSystem& sys, const BundlePoint& q0, const BundlePoint& q1) {
  Vec d1 = sys.lagrangian_gradient(q0, q1).d1;
  Vec value = -(sys.bundle().generator_matrix(q0).transpose() * d1);
  return {{std::move(value)}, sys.vertical_constrained_algebra_basis(q0)};
}

AlgebraCovector momentum_from_reduced(const ReducedSystem& red, const BundlePoint& q0, const BundlePoint& q1) {
  const LieGroup& g = red.group();
  GroupElement w0 = red.discrete_connection().form(q0, q1);
  Vec d_w0 = red.lifted_lagrangian_gradient(q0, w0, q1.base).d_w0;
  return {g.translate_cotangent({w0, d_w0}, g.inverse(w0), Side::right).coords};
}

double momentum_evolution_residual(const DiscreteSystem& sys, const BundlePoint& q_prev, const BundlePoint& q_curr,
                                   const BundlePoint& q_next, const AlgebraSection& section) {
  const BundleSpec& b = sys.bundle();
  AlgebraElement xi = section(q_curr);
  Vec ahead = sys.lagrangian_gradient(q_curr, q_next).d1;
  Vec behind = sys.lagrangian_gradient(q_prev, q_curr).d1;
  return -ahead.dot(b.infinitesimal_generator(xi, q_curr).coords) +
         behind.dot(b.infinitesimal_generator(xi, q_prev).coords);
}

}  // namespace nonholorec
