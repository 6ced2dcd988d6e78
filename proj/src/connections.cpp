#include "nonholorec/connections.hpp"

#include <cmath>

#include "nonholorec/error.hpp"
#include "nonholorec/linalg.hpp"

namespace nonholorec {

ContinuousConnection::ContinuousConnection(BundleSpec bundle, MMap m_map)
    : bundle_(std::move(bundle)), m_map_(std::move(m_map)) {
  if (!m_map_) throw ValidationError("continuous connection needs an M map");
}

Mat ContinuousConnection::m_map(const BundlePoint& q) const {
  Mat m = m_map_(q);
  if (m.rows() != bundle_.group_dim() || m.cols() != bundle_.base_dim()) {
    throw DimensionError("M map must be d_G x d_R");
  }
  return m;
}

TangentVector ContinuousConnection::horizontal_lift(const BundlePoint& q, const Vec& dr) const {
  if (dr.size() != bundle_.base_dim()) throw DimensionError("base tangent size mismatch");
  Vec coords(bundle_.dim());
  coords << dr, m_map(q) * dr;
  return {q, std::move(coords)};
}

Mat ContinuousConnection::horizontal_lift_matrix(const BundlePoint& q) const {
  Mat out(bundle_.dim(), bundle_.base_dim());
  out.topRows(bundle_.base_dim()).setIdentity();
  out.bottomRows(bundle_.group_dim()) = m_map(q);
  return out;
}

AlgebraElement ContinuousConnection::one_form(const TangentVector& dq) const {
  const BundlePoint& q = dq.at;
  bundle_.check(q);
  if (dq.coords.size() != bundle_.dim()) throw DimensionError("tangent size mismatch");
  Vec vertical = dq.fiber_part() - m_map(q) * dq.base_part();
  const LieGroup& g = bundle_.group();
  return {g.translate_tangent({q.fiber, vertical}, g.inverse(q.fiber), Side::right).coords};
}

TangentVector ContinuousConnection::horizontal_projection(const TangentVector& dq) const {
  TangentVector vertical = bundle_.infinitesimal_generator(one_form(dq), dq.at);
  return {dq.at, dq.coords - vertical.coords};
}

SplittingReport check_splitting(const DiscreteSystem& sys, const ContinuousConnection& conn,
                                const BundlePoint& q) {
  SplittingReport report;
  Mat omega = sys.annihilator_basis(q);
  report.distribution_dim = sys.bundle().dim() - static_cast<int>(omega.rows());
  report.vertical_dim = static_cast<int>(sys.vertical_constrained_algebra_basis(q).cols());
  Mat lifts = conn.horizontal_lift_matrix(q);
  report.horizontal_dim =
      omega.rows() == 0 ? static_cast<int>(lifts.cols()) : static_cast<int>(nullspace(omega * lifts).cols());
  return report;
}

AffineDiscreteConnection::AffineDiscreteConnection(BundleSpec bundle, ReducedForm reduced_form,
                                                   ReducedFormJacobian jacobian)
    : bundle_(std::move(bundle)), reduced_form_(std::move(reduced_form)), jacobian_(std::move(jacobian)) {
  if (!reduced_form_) throw ValidationError("discrete connection needs its reduced form");
}

GroupElement AffineDiscreteConnection::reduced_form(const Vec& r0, const Vec& r1) const {
  GroupElement a = reduced_form_(r0, r1);
  if (!a.coords.allFinite()) throw NumericalError("discrete connection value is not finite");
  return bundle_.group().element(std::move(a.coords));
}

AffineDiscreteConnection::ReducedJacobian AffineDiscreteConnection::numeric_reduced_jacobian(
    const Vec& r0, const Vec& r1) const {
  const CoordinateLayout& base = bundle_.base();
  const LieGroup& g = bundle_.group();
  const int nr = bundle_.base_dim();
  ReducedJacobian jac{Mat(g.dim(), nr), Mat(g.dim(), nr)};
  GroupElement center = reduced_form(r0, r1);
  for (int j = 0; j < nr; ++j) {
    Vec e = Vec::Zero(nr);
    e[j] = kDifferenceStep * (1.0 + std::abs(r0[j]));
    jac.d_r0.col(j) = (g.chart_difference(center, reduced_form(base.advance(r0, e), r1)) -
                       g.chart_difference(center, reduced_form(base.advance(r0, -e), r1))) /
                      (2.0 * e[j]);
    e[j] = kDifferenceStep * (1.0 + std::abs(r1[j]));
    jac.d_r1.col(j) = (g.chart_difference(center, reduced_form(r0, base.advance(r1, e))) -
                       g.chart_difference(center, reduced_form(r0, base.advance(r1, -e)))) /
                      (2.0 * e[j]);
  }
  return jac;
}

AffineDiscreteConnection::ReducedJacobian AffineDiscreteConnection::reduced_jacobian(const Vec& r0,
                                                                                     const Vec& r1) const {
  if (!jacobian_) return numeric_reduced_jacobian(r0, r1);
  ReducedJacobian jac = jacobian_(r0, r1);
  const int ng = bundle_.group_dim();
  const int nr = bundle_.base_dim();
  if (jac.d_r0.rows() != ng || jac.d_r0.cols() != nr || jac.d_r1.rows() != ng || jac.d_r1.cols() != nr) {
    throw DimensionError("discrete connection jacobian must be d_G x d_R");
  }
  return jac;
}

GroupElement AffineDiscreteConnection::form(const BundlePoint& q0, const BundlePoint& q1) const {
  bundle_.check(q0);
  bundle_.check(q1);
  const LieGroup& g = bundle_.group();
  return g.compose(g.compose(q1.fiber, reduced_form(q0.base, q1.base)), g.inverse(q0.fiber));
}

BundlePoint AffineDiscreteConnection::horizontal_lift(const BundlePoint& q0, const Vec& r1) const {
  bundle_.check(q0);
  const LieGroup& g = bundle_.group();
  Vec base = bundle_.base().normalize(r1);
  return {base, g.compose(q0.fiber, g.inverse(reduced_form(q0.base, base)))};
}

GroupElement AffineDiscreteConnection::level(const BundlePoint& q) const {
  return bundle_.group().inverse(form(q, q));
}

GroupTangent AffineDiscreteConnection::form_derivative_with(const ReducedJacobian& jac, const BundlePoint& q0,
                                                            const BundlePoint& q1, const Vec& dq0,
                                                            const Vec& dq1) const {
  const int nr = bundle_.base_dim();
  const int ng = bundle_.group_dim();
  if (dq0.size() != nr + ng || dq1.size() != nr + ng) throw DimensionError("tangent size mismatch");
  const LieGroup& g = bundle_.group();
  GroupElement a = reduced_form(q0.base, q1.base);
  GroupTangent da{a, jac.d_r0 * dq0.head(nr) + jac.d_r1 * dq1.head(nr)};
  GroupTangent dh1{q1.fiber, dq1.tail(ng)};
  GroupTangent dh0_inv = g.inverse_tangent({q0.fiber, dq0.tail(ng)});
  return g.product_tangent(g.product_tangent(dh1, da), dh0_inv);
}

GroupTangent AffineDiscreteConnection::form_derivative(const BundlePoint& q0, const BundlePoint& q1,
                                                       const Vec& dq0, const Vec& dq1) const {
  bundle_.check(q0);
  bundle_.check(q1);
  return form_derivative_with(reduced_jacobian(q0.base, q1.base), q0, q1, dq0, dq1);
}

AffineDiscreteConnection::FormLinearization AffineDiscreteConnection::form_linearization(
    const BundlePoint& q0, const BundlePoint& q1) const {
  bundle_.check(q0);
  bundle_.check(q1);
  const int n = bundle_.dim();
  ReducedJacobian jac = reduced_jacobian(q0.base, q1.base);
  FormLinearization out{form(q0, q1), Mat(bundle_.group_dim(), n), Mat(bundle_.group_dim(), n)};
  const Vec zero = Vec::Zero(n);
  for (int j = 0; j < n; ++j) {
    Vec e = Vec::Unit(n, j);
    out.d_q0.col(j) = form_derivative_with(jac, q0, q1, e, zero).coords;
    out.d_q1.col(j) = form_derivative_with(jac, q0, q1, zero, e).coords;
  }
  return out;
}

GroupTangent AffineDiscreteConnection::numeric_form_derivative(const BundlePoint& q0, const BundlePoint& q1,
                                                               const Vec& dq0, const Vec& dq1) const {
  const LieGroup& g = bundle_.group();
  GroupElement center = form(q0, q1);
  auto at = [&](double t) {
    return g.chart_difference(center, form(bundle_.advance(q0, t * dq0), bundle_.advance(q1, t * dq1)));
  };
  const double h = kDifferenceStep;
  return {center, (at(h) - at(-h)) / (2.0 * h)};
}

MixedCurvature mixed_curvature(const ContinuousConnection& conn, const AffineDiscreteConnection& dconn,
                               const BundlePoint& q0, const BundlePoint& q1, const Vec& dq0, const Vec& dq1) {
  Vec hor0 = conn.horizontal_projection({q0, dq0}).coords;
  Vec hor1 = conn.horizontal_projection({q1, dq1}).coords;
  Vec zero = Vec::Zero(dq0.size());
  return {dconn.form_derivative(q0, q1, hor0, zero).coords, dconn.form_derivative(q0, q1, zero, hor1).coords};
}

}  // namespace nonholorec
