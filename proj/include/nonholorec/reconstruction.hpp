#pragma once

#include <optional>

#include "nonholorec/reduction.hpp"

namespace nonholorec {

constexpr double kReconstructionTolerance = 1e-9;

// Lifts a reduced curve through q0 (and q1 when given, which must agree with
// theta_0 and the kinematic constraints). Steps use tau against the base
// section followed by f1_tilde; throws ValidationError when the data disagree.
DiscreteCurve reconstruct(const DiscreteSystem& sys, const AffineDiscreteConnection& dconn,
                          const ReducedCurve& reduced, const BundlePoint& q0,
                          const std::optional<BundlePoint>& q1 = std::nullopt,
                          double tol = kReconstructionTolerance);

// Same lift computed directly as h_{k+1} = h_k theta_k A(r_k, r_{k+1})^-1.
DiscreteCurve reconstruct_closed_form(const AffineDiscreteConnection& dconn, const ReducedCurve& reduced,
                                      const BundlePoint& q0);

// q_{k+1} = HLd_{q_k}(r_{k+1}). A supplied q1 must be the horizontal lift of q0.
DiscreteCurve reconstruct_horizontal_lift_only(const AffineDiscreteConnection& dconn, const std::vector<Vec>& base_curve,
                                               const BundlePoint& q0,
                                               const std::optional<BundlePoint>& q1 = std::nullopt,
                                               double tol = kReconstructionTolerance);

}  // namespace nonholorec
