#pragma once

#include <optional>
#include <vector>

#include "nonholorec/connections.hpp"
#include "nonholorec/newton.hpp"

namespace nonholorec {

// Trivialized reduced coordinates (r_k, theta_k), theta_k = h_k^-1 w_k h_k.
struct ReducedState {
  Vec r;
  GroupElement theta;
};

// (r_0, theta_0), ..., (r_{N-1}, theta_{N-1}) followed by the terminal base point r_N.
struct ReducedCurve {
  std::vector<ReducedState> states;
  Vec terminal_r;

  int steps() const { return static_cast<int>(states.size()); }
  const Vec& r(int k) const { return k < steps() ? states[static_cast<std::size_t>(k)].r : terminal_r; }
};

// l_{w0}(HLd_{q0}(r1)) = (r1, w0 h0 A(r0, r1)^-1).
BundlePoint f1_tilde(const AffineDiscreteConnection& dconn, const BundlePoint& q0, const GroupElement& w0,
                     const Vec& r1);
// theta0 h0 A^-1 theta1 A h0^-1 theta0^-1 with A = A(r0, r1).
GroupElement f2_t(const AffineDiscreteConnection& dconn, const Vec& r0, const GroupElement& h0,
                  const GroupElement& theta0, const Vec& r1, const GroupElement& theta1, const Vec& r2);
ReducedCurve project_curve(const AffineDiscreteConnection& dconn, const DiscreteCurve& curve);

// Derivatives of (q0, w0, r1) -> L(q0, f1_tilde(q0, w0, r1)).
struct LiftedLagrangianGradient {
  Vec d_q0;  // d_Q
  Vec d_w0;  // cotangent coordinates at w0
  Vec d_r1;  // d_R
};

// Derivatives of the trivialized reduced lagrangian L(r0, theta0, r1).
struct ReducedLagrangianGradient {
  Vec d_r0;
  Vec d_theta;
  Vec d_r1;
};

// Base covectors: `minus` pairs with variations of r0, `plus` with variations of r1.
struct ReducedForce {
  Vec minus;
  Vec plus;
};

struct ReducedResidual {
  Vec horizontal;  // paired with a basis of the reduced distribution at r1
  Vec vertical;    // paired with the conjugated constrained algebra basis
  Vec constraint;  // reduced kinematic levels at (r1, theta1, r2)
  double max() const;
  Vec stacked() const;
};

class ReducedSystem {
 public:
  ReducedSystem(DiscreteSystem sys, ContinuousConnection conn, AffineDiscreteConnection dconn);

  const DiscreteSystem& system() const { return sys_; }
  const ContinuousConnection& connection() const { return conn_; }
  const AffineDiscreteConnection& discrete_connection() const { return dconn_; }
  const BundleSpec& bundle() const { return sys_.bundle(); }
  const LieGroup& group() const { return sys_.bundle().group(); }

  double lagrangian(const Vec& r0, const GroupElement& theta0, const Vec& r1) const;
  ReducedLagrangianGradient lagrangian_gradient(const Vec& r0, const GroupElement& theta0, const Vec& r1) const;
  // The untrivialized version at an arbitrary q0.
  double lifted_lagrangian(const BundlePoint& q0, const GroupElement& w0, const Vec& r1) const;
  LiftedLagrangianGradient lifted_lagrangian_gradient(const BundlePoint& q0, const GroupElement& w0,
                                                      const Vec& r1) const;

  Vec constraint(const Vec& r0, const GroupElement& theta0, const Vec& r1) const;
  ReducedForce force(const Vec& r0, const GroupElement& theta0, const Vec& r1) const;
  // d_R x (dim D - dim S), orthonormal columns spanning d(pi)(D) at (r, e).
  Mat base_distribution(const Vec& r) const;
  // Basis of the constrained algebra at (r1, e), conjugated by h1 = theta0 A(r0, r1)^-1.
  Mat vertical_test_directions(const Vec& r0, const GroupElement& theta0, const Vec& r1) const;

  // Horizontal residual covector on T_{r1}R.
  Vec horizontal_residual(const Vec& r0, const GroupElement& theta0, const Vec& r1, const GroupElement& theta1,
                          const Vec& r2) const;
  // Vertical residual covector on the algebra.
  AlgebraCovector vertical_residual(const Vec& r0, const GroupElement& theta0, const Vec& r1,
                                    const GroupElement& theta1, const Vec& r2) const;
  ReducedResidual residuals(const Vec& r0, const GroupElement& theta0, const Vec& r1, const GroupElement& theta1,
                            const Vec& r2) const;

 private:
  DiscreteSystem sys_;
  ContinuousConnection conn_;
  AffineDiscreteConnection dconn_;

  friend class ReducedStepContext;
  // Forces at (r0, theta0, r1) given d_theta of the reduced lagrangian there.
  ReducedForce force_given(const Vec& r0, const GroupElement& theta0, const Vec& r1, const Vec& d_theta) const;
};

double bar_phi_t(const ReducedSystem& red, const Vec& r0, const GroupElement& theta0, const Vec& r1,
                 const GroupElement& theta1, const Vec& r2, const Vec& dr1);
double bar_psi_t(const ReducedSystem& red, const Vec& r0, const GroupElement& theta0, const Vec& r1,
                 const GroupElement& theta1, const Vec& r2, const AlgebraElement& xi1);

struct ReducedStepResult {
  GroupElement theta;
  Vec r_next;
  int iterations = 0;
  double residual_norm = 0.0;
};

// Solves the full reduced system (both projections plus the constraint) for
// (theta_curr, r_next). The default guess keeps theta and extrapolates r.
ReducedStepResult reduced_step(const ReducedSystem& red, const Vec& r_prev, const GroupElement& theta_prev,
                               const Vec& r_curr, const SolverConfig& config = {},
                               const std::optional<ReducedState>& guess = std::nullopt);

struct ReducedTrajectory {
  ReducedCurve curve;
  std::vector<int> iterations;
};

ReducedTrajectory reduced_trajectory(const ReducedSystem& red, const Vec& r0, const GroupElement& theta0,
                                     const Vec& r1, int steps, const SolverConfig& config = {});

// Largest reduced residual over every interior index of a reduced curve.
double max_reduced_residual(const ReducedSystem& red, const ReducedCurve& curve);

}  // namespace nonholorec
