#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "nonholorec/bundle.hpp"

namespace nonholorec {

// Partial derivatives of a two-point function, in bundle coordinates.
struct PointPairGradient {
  Vec d1;
  Vec d2;
};

using PairFunction = std::function<double(const BundlePoint&, const BundlePoint&)>;
using PairGradient = std::function<PointPairGradient(const BundlePoint&, const BundlePoint&)>;
using PairVector = std::function<Vec(const BundlePoint&, const BundlePoint&)>;
// Rows are the covectors omega^a(q) spanning the annihilator of D at q.
using AnnihilatorField = std::function<Mat(const BundlePoint&)>;

// minus(q0, q1) acts on variations at q0, plus(q0, q1) on variations at q1.
struct DiscreteForce {
  PairVector minus;
  PairVector plus;
};

struct SystemDefinition {
  BundleSpec bundle;
  PairFunction lagrangian;
  PairGradient lagrangian_gradient;  // optional; central differences when empty
  AnnihilatorField variational_constraints;
  PairVector kinematic_constraints;  // zero iff (q0, q1) lies in the constraint set
  std::optional<DiscreteForce> force;
};

using DiscreteCurve = std::vector<BundlePoint>;

// Nonholonomic discrete mechanical system on a trivial bundle. Requires as many
// kinematic constraint levels as variational constraints.
class DiscreteSystem {
 public:
  static constexpr double kGradientStep = 1e-6;

  explicit DiscreteSystem(SystemDefinition def);

  const BundleSpec& bundle() const { return def_.bundle; }
  const SystemDefinition& definition() const { return def_; }
  int constraint_count() const { return constraint_count_; }
  int distribution_dim() const { return bundle().dim() - constraint_count_; }
  bool has_analytic_gradient() const { return static_cast<bool>(def_.lagrangian_gradient); }
  bool has_force() const { return def_.force.has_value(); }

  double lagrangian(const BundlePoint& q0, const BundlePoint& q1) const;
  Covector d1_lagrangian(const BundlePoint& q0, const BundlePoint& q1) const;
  Covector d2_lagrangian(const BundlePoint& q0, const BundlePoint& q1) const;
  PointPairGradient lagrangian_gradient(const BundlePoint& q0, const BundlePoint& q1) const;
  // Same derivatives, always by central differences.
  PointPairGradient numeric_lagrangian_gradient(const BundlePoint& q0, const BundlePoint& q1) const;

  Vec constraint_residual(const BundlePoint& q0, const BundlePoint& q1) const;
  Vec force_minus(const BundlePoint& q0, const BundlePoint& q1) const;
  Vec force_plus(const BundlePoint& q0, const BundlePoint& q1) const;

  // M x d_Q, rows omega^a(q); throws when the rows are dependent.
  Mat annihilator_basis(const BundlePoint& q) const;
  // d_Q x (d_Q - M), orthonormal columns spanning D_q.
  Mat distribution_basis(const BundlePoint& q) const;
  // d_G x s, orthonormal columns spanning the algebra elements whose generators lie in D_q.
  Mat vertical_constrained_algebra_basis(const BundlePoint& q) const;

  // Same functions, reinterpreted on another bundle with identical coordinates.
  DiscreteSystem with_bundle(const BundleSpec& other) const;

 private:
  SystemDefinition def_;
  int constraint_count_ = 0;
};

}  // namespace nonholorec
