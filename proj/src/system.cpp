#include "nonholorec/system.hpp"

#include <cmath>
#include <string>

#include "nonholorec/error.hpp"
#include "nonholorec/linalg.hpp"

namespace nonholorec {

namespace {

double checked(double value, const char* what) {
  if (!std::isfinite(value)) throw NumericalError(std::string(what) + " is not finite");
  return value;
}

Vec checked(Vec value, const char* what) {
  if (!value.allFinite()) throw NumericalError(std::string(what) + " is not finite");
  return value;
}

}  // namespace

DiscreteSystem::DiscreteSystem(SystemDefinition def) : def_(std::move(def)) {
  if (!def_.lagrangian || !def_.variational_constraints || !def_.kinematic_constraints) {
    throw ValidationError("system needs a lagrangian, variational and kinematic constraints");
  }
  if (def_.force && (!def_.force->minus || !def_.force->plus)) {
    throw ValidationError("a discrete force needs both its minus and plus parts");
  }
  const BundleSpec& b = def_.bundle;
  BundlePoint ref = b.point(Vec::Zero(b.base_dim()), Vec::Zero(b.group_dim()));
  Mat omega = def_.variational_constraints(ref);
  Vec chi = def_.kinematic_constraints(ref, ref);
  if (omega.rows() > 0 && omega.cols() != b.dim()) {
    throw DimensionError("constraint covectors have " + std::to_string(omega.cols()) +
                         " columns, configuration dimension is " + std::to_string(b.dim()));
  }
  if (omega.rows() > b.dim()) throw DimensionError("more variational constraints than dimensions");
  if (chi.size() != omega.rows()) {
    throw ValidationError("kinematic constraint count " + std::to_string(chi.size()) +
                          " differs from variational constraint count " + std::to_string(omega.rows()));
  }
  constraint_count_ = static_cast<int>(omega.rows());
}

double DiscreteSystem::lagrangian(const BundlePoint& q0, const BundlePoint& q1) const {
  return checked(def_.lagrangian(q0, q1), "lagrangian");
}

PointPairGradient DiscreteSystem::numeric_lagrangian_gradient(const BundlePoint& q0,
                                                              const BundlePoint& q1) const {
  const BundleSpec& b = bundle();
  const int n = b.dim();
  Vec x0 = b.coords(q0);
  Vec x1 = b.coords(q1);
  PointPairGradient g{Vec(n), Vec(n)};
  for (int j = 0; j < n; ++j) {
    Vec e = Vec::Zero(n);
    e[j] = kGradientStep * (1.0 + std::abs(x0[j]));
    g.d1[j] = (lagrangian(b.advance(q0, e), q1) - lagrangian(b.advance(q0, -e), q1)) / (2.0 * e[j]);
    e[j] = kGradientStep * (1.0 + std::abs(x1[j]));
    g.d2[j] = (lagrangian(q0, b.advance(q1, e)) - lagrangian(q0, b.advance(q1, -e))) / (2.0 * e[j]);
  }
  return g;
}

PointPairGradient DiscreteSystem::lagrangian_gradient(const BundlePoint& q0, const BundlePoint& q1) const {
  if (!has_analytic_gradient()) return numeric_lagrangian_gradient(q0, q1);
  PointPairGradient g = def_.lagrangian_gradient(q0, q1);
  if (g.d1.size() != bundle().dim() || g.d2.size() != bundle().dim()) {
    throw DimensionError("lagrangian gradient has the wrong size");
  }
  checked(g.d1, "lagrangian gradient");
  checked(g.d2, "lagrangian gradient");
  return g;
}

Covector DiscreteSystem::d1_lagrangian(const BundlePoint& q0, const BundlePoint& q1) const {
  return {q0, lagrangian_gradient(q0, q1).d1};
}

Covector DiscreteSystem::d2_lagrangian(const BundlePoint& q0, const BundlePoint& q1) const {
  return {q1, lagrangian_gradient(q0, q1).d2};
}

Vec DiscreteSystem::constraint_residual(const BundlePoint& q0, const BundlePoint& q1) const {
  Vec chi = checked(def_.kinematic_constraints(q0, q1), "kinematic constraint");
  if (chi.size() != constraint_count_) throw DimensionError("kinematic constraint size changed");
  return chi;
}

Vec DiscreteSystem::force_minus(const BundlePoint& q0, const BundlePoint& q1) const {
  if (!def_.force) return Vec::Zero(bundle().dim());
  return checked(def_.force->minus(q0, q1), "discrete force");
}

Vec DiscreteSystem::force_plus(const BundlePoint& q0, const BundlePoint& q1) const {
  if (!def_.force) return Vec::Zero(bundle().dim());
  return checked(def_.force->plus(q0, q1), "discrete force");
}

Mat DiscreteSystem::annihilator_basis(const BundlePoint& q) const {
  Mat omega = def_.variational_constraints(q);
  if (omega.rows() != constraint_count_ || (omega.rows() > 0 && omega.cols() != bundle().dim())) {
    throw DimensionError("variational constraint shape changed");
  }
  if (omega.rows() == 0) return Mat(0, bundle().dim());
  int rank = numerical_rank(omega);
  if (rank != constraint_count_) {
    throw ValidationError("constraint covectors are dependent: rank " + std::to_string(rank) + " of " +
                          std::to_string(constraint_count_));
  }
  return omega;
}

Mat DiscreteSystem::distribution_basis(const BundlePoint& q) const {
  return nullspace(annihilator_basis(q));
}

Mat DiscreteSystem::vertical_constrained_algebra_basis(const BundlePoint& q) const {
  Mat omega = annihilator_basis(q);
  if (omega.rows() == 0) return Mat::Identity(bundle().group_dim(), bundle().group_dim());
  return nullspace(omega * bundle().generator_matrix(q));
}

DiscreteSystem DiscreteSystem::with_bundle(const BundleSpec& other) const {
  const BundleSpec& mine = bundle();
  if (other.dim() != mine.dim()) throw DimensionError("rebundling needs equal configuration dimension");
  auto to_mine = [mine, other](const BundlePoint& q) { return mine.from_coords(other.coords(q)); };
  SystemDefinition def{other, nullptr, nullptr, nullptr, nullptr, std::nullopt};
  const SystemDefinition& src = def_;
  def.lagrangian = [f = src.lagrangian, to_mine](const BundlePoint& a, const BundlePoint& b) {
    return f(to_mine(a), to_mine(b));
  };
  if (src.lagrangian_gradient) {
    def.lagrangian_gradient = [f = src.lagrangian_gradient, to_mine](const BundlePoint& a,
                                                                    const BundlePoint& b) {
      return f(to_mine(a), to_mine(b));
    };
  }
  def.variational_constraints = [f = src.variational_constraints, to_mine](const BundlePoint& a) {
    return f(to_mine(a));
  };
  def.kinematic_constraints = [f = src.kinematic_constraints, to_mine](const BundlePoint& a,
                                                                      const BundlePoint& b) {
    return f(to_mine(a), to_mine(b));
  };
  if (src.force) {
    def.force = DiscreteForce{
        [f = src.force->minus, to_mine](const BundlePoint& a, const BundlePoint& b) {
          return f(to_mine(a), to_mine(b));
        },
        [f = src.force->plus, to_mine](const BundlePoint& a, const BundlePoint& b) {
          return f(to_mine(a), to_mine(b));
        }};
  }
  return DiscreteSystem(std::move(def));
}

}  // namespace nonholorec
