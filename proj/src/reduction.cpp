#include "nonholorec/reduction.hpp"

#include <algorithm>
#include <sstream>

#include "nonholorec/dla_solver.hpp"
#include "nonholorec/error.hpp"
#include "nonholorec/linalg.hpp"

namespace nonholorec {

BundlePoint f1_tilde(const AffineDiscreteConnection& dconn, const BundlePoint& q0, const GroupElement& w0,
                     const Vec& r1) {
  const BundleSpec& b = dconn.bundle();
  return b.act(w0, dconn.horizontal_lift(q0, r1));
}

GroupElement f2_t(const AffineDiscreteConnection& dconn, const Vec& r0, const GroupElement& h0,
                  const GroupElement& theta0, const Vec& r1, const GroupElement& theta1, const Vec&) {
  const LieGroup& g = dconn.bundle().group();
  GroupElement h1 = g.compose(g.compose(theta0, h0), g.inverse(dconn.reduced_form(r0, r1)));
  return g.conjugate(h1, theta1);
}

ReducedCurve project_curve(const AffineDiscreteConnection& dconn, const DiscreteCurve& curve) {
  if (curve.empty()) throw ValidationError("cannot project an empty curve");
  const LieGroup& g = dconn.bundle().group();
  ReducedCurve out;
  for (std::size_t k = 0; k + 1 < curve.size(); ++k) {
    const GroupElement& h = curve[k].fiber;
    GroupElement w = dconn.form(curve[k], curve[k + 1]);
    out.states.push_back({curve[k].base, g.compose(g.compose(g.inverse(h), w), h)});
  }
  out.terminal_r = curve.back().base;
  return out;
}

double ReducedResidual::max() const {
  return std::max({max_abs(horizontal), max_abs(vertical), max_abs(constraint)});
}

Vec ReducedResidual::stacked() const {
  Vec out(horizontal.size() + vertical.size() + constraint.size());
  out << horizontal, vertical, constraint;
  return out;
}

ReducedSystem::ReducedSystem(DiscreteSystem sys, ContinuousConnection conn, AffineDiscreteConnection dconn)
    : sys_(std::move(sys)), conn_(std::move(conn)), dconn_(std::move(dconn)) {
  const BundleSpec& b = sys_.bundle();
  if (conn_.bundle().dim() != b.dim() || dconn_.bundle().dim() != b.dim() ||
      conn_.bundle().base_dim() != b.base_dim() || dconn_.bundle().base_dim() != b.base_dim()) {
    throw DimensionError("system and connections live on different bundles");
  }
}

double ReducedSystem::lifted_lagrangian(const BundlePoint& q0, const GroupElement& w0, const Vec& r1) const {
  return sys_.lagrangian(q0, f1_tilde(dconn_, q0, w0, r1));
}

double ReducedSystem::lagrangian(const Vec& r0, const GroupElement& theta0, const Vec& r1) const {
  return lifted_lagrangian(bundle().base_section(r0), theta0, r1);
}

LiftedLagrangianGradient ReducedSystem::lifted_lagrangian_gradient(const BundlePoint& q0, const GroupElement& w0,
                                                                   const Vec& r1) const {
  const BundleSpec& b = bundle();
  const LieGroup& g = group();
  const int nr = b.base_dim();
  const int ng = b.group_dim();
  const Vec zero_g = Vec::Zero(ng);

  Vec r1n = b.base().normalize(r1);
  GroupElement a = dconn_.reduced_form(q0.base, r1n);
  GroupElement a_inv = g.inverse(a);
  GroupElement p = g.compose(w0, q0.fiber);
  BundlePoint q1{r1n, g.compose(p, a_inv)};
  AffineDiscreteConnection::ReducedJacobian jac = dconn_.reduced_jacobian(q0.base, r1n);
  PointPairGradient grad = sys_.lagrangian_gradient(q0, q1);
  const Vec g2_fiber = grad.d2.tail(ng);

  // Fiber of q1 is p a^-1 with p = w0 h0; differentiate it in each argument.
  auto through_a = [&](const Vec& da) {
    return g.product_tangent({p, zero_g}, g.inverse_tangent({a, da})).coords;
  };
  Mat f_r0(ng, nr), f_r1(ng, nr), f_h0(ng, ng), f_w0(ng, ng);
  for (int j = 0; j < nr; ++j) {
    f_r0.col(j) = through_a(jac.d_r0.col(j));
    f_r1.col(j) = through_a(jac.d_r1.col(j));
  }
  for (int i = 0; i < ng; ++i) {
    Vec e = Vec::Unit(ng, i);
    GroupTangent dp_h = g.product_tangent({w0, zero_g}, {q0.fiber, e});
    f_h0.col(i) = g.product_tangent(dp_h, {a_inv, zero_g}).coords;
    GroupTangent dp_w = g.product_tangent({w0, e}, {q0.fiber, zero_g});
    f_w0.col(i) = g.product_tangent(dp_w, {a_inv, zero_g}).coords;
  }

  LiftedLagrangianGradient out{grad.d1, f_w0.transpose() * g2_fiber, grad.d2.head(nr) + f_r1.transpose() * g2_fiber};
  out.d_q0.head(nr) += f_r0.transpose() * g2_fiber;
  out.d_q0.tail(ng) += f_h0.transpose() * g2_fiber;
  return out;
}

ReducedLagrangianGradient ReducedSystem::lagrangian_gradient(const Vec& r0, const GroupElement& theta0,
                                                             const Vec& r1) const {
  LiftedLagrangianGradient lifted = lifted_lagrangian_gradient(bundle().base_section(r0), theta0, r1);
  return {lifted.d_q0.head(bundle().base_dim()), std::move(lifted.d_w0), std::move(lifted.d_r1)};
}

Vec ReducedSystem::constraint(const Vec& r0, const GroupElement& theta0, const Vec& r1) const {
  BundlePoint q0 = bundle().base_section(r0);
  return sys_.constraint_residual(q0, f1_tilde(dconn_, q0, theta0, r1));
}

ReducedForce ReducedSystem::force_given(const Vec& r0, const GroupElement& theta0, const Vec& r1,
                                        const Vec& d_theta) const {
  BundlePoint q0 = bundle().base_section(r0);
  BundlePoint q1 = f1_tilde(dconn_, q0, theta0, r1);
  AffineDiscreteConnection::FormLinearization lin = dconn_.form_linearization(q0, q1);
  Mat lift0 = conn_.horizontal_lift_matrix(q0);
  Mat lift1 = conn_.horizontal_lift_matrix(q1);
  return {(lin.d_q0 * lift0).transpose() * d_theta, (lin.d_q1 * lift1).transpose() * d_theta};
}

ReducedForce ReducedSystem::force(const Vec& r0, const GroupElement& theta0, const Vec& r1) const {
  return force_given(r0, theta0, r1, lagrangian_gradient(r0, theta0, r1).d_theta);
}

Mat ReducedSystem::base_distribution(const Vec& r) const {
  BundlePoint q = bundle().base_section(r);
  Mat dist = sys_.distribution_basis(q);
  const int s = static_cast<int>(sys_.vertical_constrained_algebra_basis(q).cols());
  Mat basis = range_basis(dist.topRows(bundle().base_dim()));
  if (basis.cols() != dist.cols() - s) {
    std::ostringstream msg;
    msg << "reduced distribution has rank " << basis.cols() << ", expected dim D - dim S = " << dist.cols() - s;
    throw DimensionError(msg.str());
  }
  return basis;
}

Mat ReducedSystem::vertical_test_directions(const Vec& r0, const GroupElement& theta0, const Vec& r1) const {
  const LieGroup& g = group();
  Mat basis = sys_.vertical_constrained_algebra_basis(bundle().base_section(r1));
  GroupElement h1 = g.compose(theta0, g.inverse(dconn_.reduced_form(r0, r1)));
  for (int j = 0; j < basis.cols(); ++j) basis.col(j) = g.adjoint(h1, {basis.col(j)}).coords;
  return basis;
}

// Pieces of the reduced equations at index 1 that depend only on (r0, theta0, r1).
class ReducedStepContext {
 public:
  ReducedStepContext(const ReducedSystem& red, const Vec& r0, const GroupElement& theta0, const Vec& r1)
      : red_(red), r1_(red.bundle().base().normalize(r1)) {
    const LieGroup& g = red.group();
    ReducedLagrangianGradient d0 = red.lagrangian_gradient(r0, theta0, r1_);
    d3_ = d0.d_r1;
    force_plus_ = red.force_given(r0, theta0, r1_, d0.d_theta).plus;
    alpha0_ = g.translate_cotangent({theta0, d0.d_theta}, g.inverse(theta0), Side::right).coords;
    h1_ = g.compose(theta0, g.inverse(red.discrete_connection().reduced_form(r0, r1_)));
    m_at_identity_ = red.connection().m_map(red.bundle().base_section(r1_));
    base_distribution_ = red.base_distribution(r1_);
    vertical_directions_ = red.vertical_test_directions(r0, theta0, r1_);
  }

  Vec horizontal_covector(const GroupElement& theta1, const Vec& r2, const ReducedLagrangianGradient& d1) const {
    const LieGroup& g = red_.group();
    Vec phi = d1.d_r0 + d3_ + force_plus_ + red_.force_given(r1_, theta1, r2, d1.d_theta).minus;
    // theta1 M - M theta1 paired with d_theta; zero for abelian groups.
    for (int j = 0; j < m_at_identity_.cols(); ++j) {
      GroupTangent zeta{g.identity(), m_at_identity_.col(j)};
      Vec bracket = g.translate_tangent(zeta, theta1, Side::left).coords -
                    g.translate_tangent(zeta, theta1, Side::right).coords;
      phi[j] += d1.d_theta.dot(bracket);
    }
    return phi;
  }

  Vec vertical_covector(const GroupElement& theta1, const ReducedLagrangianGradient& d1) const {
    const LieGroup& g = red_.group();
    GroupCotangent at_e = g.translate_cotangent({theta1, d1.d_theta}, g.inverse(theta1), Side::right);
    GroupCotangent conj = g.translate_cotangent(g.translate_cotangent(at_e, h1_, Side::left), g.inverse(h1_),
                                                Side::right);
    return alpha0_ - conj.coords;
  }

  ReducedResidual evaluate(const GroupElement& theta1, const Vec& r2) const {
    ReducedLagrangianGradient d1 = red_.lagrangian_gradient(r1_, theta1, r2);
    return {base_distribution_.transpose() * horizontal_covector(theta1, r2, d1),
            vertical_directions_.transpose() * vertical_covector(theta1, d1), red_.constraint(r1_, theta1, r2)};
  }

  int equation_count() const {
    return static_cast<int>(base_distribution_.cols() + vertical_directions_.cols()) +
           red_.system().constraint_count();
  }

 private:
  const ReducedSystem& red_;
  Vec r1_;
  Vec d3_;
  Vec force_plus_;
  Vec alpha0_;
  GroupElement h1_;
  Mat m_at_identity_;
  Mat base_distribution_;
  Mat vertical_directions_;
};

Vec ReducedSystem::horizontal_residual(const Vec& r0, const GroupElement& theta0, const Vec& r1,
                                       const GroupElement& theta1, const Vec& r2) const {
  ReducedStepContext ctx(*this, r0, theta0, r1);
  return ctx.horizontal_covector(theta1, r2, lagrangian_gradient(r1, theta1, r2));
}

AlgebraCovector ReducedSystem::vertical_residual(const Vec& r0, const GroupElement& theta0, const Vec& r1,
                                                 const GroupElement& theta1, const Vec& r2) const {
  ReducedStepContext ctx(*this, r0, theta0, r1);
  return {ctx.vertical_covector(theta1, lagrangian_gradient(r1, theta1, r2))};
}

ReducedResidual ReducedSystem::residuals(const Vec& r0, const GroupElement& theta0, const Vec& r1,
                                         const GroupElement& theta1, const Vec& r2) const {
  return ReducedStepContext(*this, r0, theta0, r1).evaluate(theta1, r2);
}

double bar_phi_t(const ReducedSystem& red, const Vec& r0, const GroupElement& theta0, const Vec& r1,
                 const GroupElement& theta1, const Vec& r2, const Vec& dr1) {
  return red.horizontal_residual(r0, theta0, r1, theta1, r2).dot(dr1);
}

double bar_psi_t(const ReducedSystem& red, const Vec& r0, const GroupElement& theta0, const Vec& r1,
                 const GroupElement& theta1, const Vec& r2, const AlgebraElement& xi1) {
  return red.vertical_residual(r0, theta0, r1, theta1, r2)(xi1);
}

ReducedStepResult reduced_step(const ReducedSystem& red, const Vec& r_prev, const GroupElement& theta_prev,
                               const Vec& r_curr, const SolverConfig& config,
                               const std::optional<ReducedState>& guess) {
  const CoordinateLayout& base = red.bundle().base();
  const LieGroup& g = red.group();
  const int nr = base.dim();
  const int ng = g.dim();

  ReducedStepContext ctx(red, r_prev, theta_prev, r_curr);
  if (ctx.equation_count() != nr + ng) {
    std::ostringstream msg;
    msg << "reduced step has " << ctx.equation_count() << " equations for " << nr + ng << " unknowns";
    throw DimensionError(msg.str());
  }

  GroupElement theta_start = guess ? guess->theta : theta_prev;
  Vec r_start = guess ? base.normalize(guess->r) : base.advance(r_curr, base.difference(r_prev, r_curr));

  auto residual = [&](const Vec& z) {
    return ctx.evaluate(g.chart_advance(theta_start, z.head(ng)), base.advance(r_start, z.tail(nr))).stacked();
  };
  Vec scale(ng + nr);
  scale << theta_start.coords, r_start;
  NewtonResult sol = solve_newton(residual, Vec::Zero(ng + nr), scale, config);
  return {g.chart_advance(theta_start, sol.x.head(ng)), base.advance(r_start, sol.x.tail(nr)), sol.iterations,
          sol.residual_norm};
}

ReducedTrajectory reduced_trajectory(const ReducedSystem& red, const Vec& r0, const GroupElement& theta0,
                                     const Vec& r1, int steps, const SolverConfig& config) {
  if (steps < 1) throw ValidationError("a reduced trajectory needs at least one step");
  double chi = max_abs(red.constraint(r0, theta0, r1));
  if (chi > std::max(kInitialConstraintTolerance, config.residual_tolerance)) {
    std::ostringstream msg;
    msg << "initial reduced data violates the kinematic constraints (residual " << chi << ")";
    throw ValidationError(msg.str(), chi);
  }
  const CoordinateLayout& base = red.bundle().base();
  ReducedTrajectory out;
  out.curve.states.push_back({base.normalize(r0), theta0});
  Vec r_next = base.normalize(r1);
  for (int k = 1; k < steps; ++k) {
    const ReducedState& prev = out.curve.states.back();
    try {
      ReducedStepResult step = reduced_step(red, prev.r, prev.theta, r_next, config);
      out.curve.states.push_back({r_next, step.theta});
      r_next = step.r_next;
      out.iterations.push_back(step.iterations);
    } catch (const SingularJacobianError& e) {
      throw SingularJacobianError("reduced step " + std::to_string(k) + ": " + e.what(), e.iterations(),
                                  e.residual(), k);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("reduced step " + std::to_string(k) + ": " + e.what(), e.iterations(), e.residual(), k);
    }
  }
  out.curve.terminal_r = r_next;
  return out;
}

double max_reduced_residual(const ReducedSystem& red, const ReducedCurve& curve) {
  double worst = 0.0;
  for (int k = 1; k < curve.steps(); ++k) {
    const ReducedState& prev = curve.states[static_cast<std::size_t>(k - 1)];
    const ReducedState& cur = curve.states[static_cast<std::size_t>(k)];
    worst = std::max(worst, red.residuals(prev.r, prev.theta, cur.r, cur.theta, curve.r(k + 1)).max());
  }
  return worst;
}

}  // namespace nonholorec
