#pragma once

#include <functional>

#include "nonholorec/system.hpp"

namespace nonholorec {

// Connection whose horizontal space at q is the graph {(dr, M(q) dr)}.
class ContinuousConnection {
 public:
  // d_G x d_R matrix, fiber tangent coordinates at h.
  using MMap = std::function<Mat(const BundlePoint&)>;

  ContinuousConnection(BundleSpec bundle, MMap m_map);

  const BundleSpec& bundle() const { return bundle_; }
  Mat m_map(const BundlePoint& q) const;
  TangentVector horizontal_lift(const BundlePoint& q, const Vec& dr) const;
  // d_Q x d_R, columns are the lifts of the base coordinate vectors.
  Mat horizontal_lift_matrix(const BundlePoint& q) const;
  AlgebraElement one_form(const TangentVector& dq) const;
  TangentVector horizontal_projection(const TangentVector& dq) const;

 private:
  BundleSpec bundle_;
  MMap m_map_;
};

struct SplittingReport {
  int distribution_dim = 0;
  int vertical_dim = 0;    // dim of V_q meet D_q
  int horizontal_dim = 0;  // dim of Hor_q meet D_q
  bool holds() const { return vertical_dim + horizontal_dim == distribution_dim; }
};

// Checks D_q = (V_q meet D_q) + (Hor_q meet D_q).
SplittingReport check_splitting(const DiscreteSystem& sys, const ContinuousConnection& conn,
                                const BundlePoint& q);

// Affine discrete connection on R x G, determined by A(r0, r1) through
// form((r0,h0),(r1,h1)) = h1 A(r0,r1) h0^-1.
class AffineDiscreteConnection {
 public:
  static constexpr double kDifferenceStep = 1e-6;

  using ReducedForm = std::function<GroupElement(const Vec& r0, const Vec& r1)>;
  // Derivatives of A in the group tangent coordinates at A(r0, r1), each d_G x d_R.
  struct ReducedJacobian {
    Mat d_r0;
    Mat d_r1;
  };
  using ReducedFormJacobian = std::function<ReducedJacobian(const Vec& r0, const Vec& r1)>;

  AffineDiscreteConnection(BundleSpec bundle, ReducedForm reduced_form, ReducedFormJacobian jacobian = {});

  const BundleSpec& bundle() const { return bundle_; }
  bool has_analytic_jacobian() const { return static_cast<bool>(jacobian_); }

  GroupElement reduced_form(const Vec& r0, const Vec& r1) const;
  ReducedJacobian reduced_jacobian(const Vec& r0, const Vec& r1) const;
  ReducedJacobian numeric_reduced_jacobian(const Vec& r0, const Vec& r1) const;

  GroupElement form(const BundlePoint& q0, const BundlePoint& q1) const;
  // The q1 over r1 with form(q0, q1) = e.
  BundlePoint horizontal_lift(const BundlePoint& q0, const Vec& r1) const;
  GroupElement level(const BundlePoint& q) const;

  // Linearization of form at (q0, q1): d(form) = d_q0 dq0 + d_q1 dq1, tangent at `at`.
  struct FormLinearization {
    GroupElement at;
    Mat d_q0;
    Mat d_q1;
  };
  FormLinearization form_linearization(const BundlePoint& q0, const BundlePoint& q1) const;

  // Derivative of form along (dq0, dq1), as a tangent at form(q0, q1).
  GroupTangent form_derivative(const BundlePoint& q0, const BundlePoint& q1, const Vec& dq0,
                               const Vec& dq1) const;
  // The same derivative by central differences of form along straight coordinate lines.
  GroupTangent numeric_form_derivative(const BundlePoint& q0, const BundlePoint& q1, const Vec& dq0,
                                       const Vec& dq1) const;

 private:
  BundleSpec bundle_;
  ReducedForm reduced_form_;
  ReducedFormJacobian jacobian_;

  GroupTangent form_derivative_with(const ReducedJacobian& jac, const BundlePoint& q0, const BundlePoint& q1,
                                    const Vec& dq0, const Vec& dq1) const;
};

struct MixedCurvature {
  Vec minus;  // from the variation at q0
  Vec plus;   // from the variation at q1
  Vec total() const { return minus + plus; }
};

// Derivative of the discrete form along the continuous-horizontal parts of (dq0, dq1).
MixedCurvature mixed_curvature(const ContinuousConnection& conn, const AffineDiscreteConnection& dconn,
                               const BundlePoint& q0, const BundlePoint& q1, const Vec& dq0, const Vec& dq1);

}  // namespace nonholorec
