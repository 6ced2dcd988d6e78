#include "nonholorec/examples.hpp"

#include <cmath>
#include <initializer_list>

#include "nonholorec/dla_solver.hpp"
#include "nonholorec/error.hpp"
#include "nonholorec/reconstruction.hpp"
#include "nonholorec/reference.hpp"

namespace nonholorec {

namespace {

void require_positive(const std::string& name, double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ValidationError("parameter " + name + " must be positive", value);
  }
}

double param(const std::map<std::string, double>& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

// Fiber translation by a scalar on a one-dimensional line group.
std::shared_ptr<const AbelianGroup> line_group() { return AbelianGroup::make({1, 0}); }

// A(r0, r1) = -c (x1^2 - x0^2)/2 on the first base coordinate, for a one-dimensional fiber.
AffineDiscreteConnection quadratic_connection(const BundleSpec& bundle, double c) {
  const int nr = bundle.base_dim();
  auto form = [c, g = bundle.group_ptr()](const Vec& r0, const Vec& r1) {
    return g->element(Vec::Constant(1, -0.5 * c * (r1[0] * r1[0] - r0[0] * r0[0])));
  };
  auto jacobian = [c, nr](const Vec& r0, const Vec& r1) {
    AffineDiscreteConnection::ReducedJacobian jac{Mat::Zero(1, nr), Mat::Zero(1, nr)};
    jac.d_r0(0, 0) = c * r0[0];
    jac.d_r1(0, 0) = -c * r1[0];
    return jac;
  };
  return AffineDiscreteConnection(bundle, form, jacobian);
}

// Shared by both particles: the constraint dy = x dx with y the coordinate at `y_index`.
SystemDefinition particle_definition(const BundleSpec& bundle, double m, int y_index) {
  const int n = bundle.dim();
  SystemDefinition def{bundle, nullptr, nullptr, nullptr, nullptr, std::nullopt};
  def.lagrangian = [bundle, m](const BundlePoint& q0, const BundlePoint& q1) {
    return 0.5 * m * bundle.difference(q0, q1).squaredNorm();
  };
  def.lagrangian_gradient = [bundle, m](const BundlePoint& q0, const BundlePoint& q1) {
    Vec d = m * bundle.difference(q0, q1);
    return PointPairGradient{-d, d};
  };
  def.variational_constraints = [n, y_index](const BundlePoint& q) {
    Mat omega = Mat::Zero(1, n);
    omega(0, 0) = -q.base[0];
    omega(0, y_index) = 1.0;
    return omega;
  };
  def.kinematic_constraints = [bundle, y_index](const BundlePoint& q0, const BundlePoint& q1) {
    Vec c0 = bundle.coords(q0);
    Vec c1 = bundle.coords(q1);
    return Vec::Constant(1, c1[y_index] - c0[y_index] - 0.5 * (c1[0] * c1[0] - c0[0] * c0[0]));
  };
  return def;
}

}  // namespace

std::string to_string(ReductionMode mode) {
  switch (mode) {
    case ReductionMode::general:
      return "general";
    case ReductionMode::chaplygin:
      return "chaplygin";
    case ReductionMode::horizontal:
      return "horizontal";
    case ReductionMode::two_stage:
      return "two-stage";
  }
  return "general";
}

ReductionMode parse_reduction_mode(const std::string& name) {
  for (ReductionMode mode :
       {ReductionMode::general, ReductionMode::chaplygin, ReductionMode::horizontal, ReductionMode::two_stage}) {
    if (to_string(mode) == name) return mode;
  }
  throw ValidationError("unknown reduction mode '" + name + "'", 0.0);
}

ExampleBundle make_particle_2d(double m, double b) {
  require_positive("m", m);
  if (!std::isfinite(b)) throw ValidationError("parameter b must be finite", b);
  BundleSpec bundle(CoordinateLayout::lines(1), line_group());
  DiscreteSystem sys(particle_definition(bundle, m, 1));
  ContinuousConnection conn(bundle, [](const BundlePoint& q) { return Mat::Constant(1, 1, q.base[0]); });

  auto complete = [bundle](const BundlePoint& q0, const BundlePoint& q1) {
    double y1 = q0.fiber.coords[0] + 0.5 * (q1.base[0] * q1.base[0] - q0.base[0] * q0.base[0]);
    return bundle.point(q1.base, Vec::Constant(1, y1));
  };
  auto ref = [bundle](const BundlePoint& q0, const BundlePoint& q1, int steps) {
    return reference::particle_2d(bundle, q0, q1, steps);
  };
  return ExampleBundle{"particle2d",
                       {{"m", m}, {"b", b}},
                       sys,
                       conn,
                       quadratic_connection(bundle, b),
                       b == 1.0 ? ReductionMode::chaplygin : ReductionMode::general,
                       {"x", "y"},
                       complete,
                       nullptr,
                       std::nullopt,
                       ref};
}

ExampleBundle make_rolling_disk(double m, double radius, double inertia_roll, double inertia_turn) {
  require_positive("m", m);
  require_positive("A", radius);
  require_positive("I", inertia_roll);
  require_positive("J", inertia_turn);
  BundleSpec bundle(CoordinateLayout({true}), AbelianGroup::make({2, 1}));
  const Vec weights{{inertia_turn, m, m, inertia_roll}};

  SystemDefinition def{bundle, nullptr, nullptr, nullptr, nullptr, std::nullopt};
  def.lagrangian = [bundle, weights](const BundlePoint& q0, const BundlePoint& q1) {
    Vec d = bundle.difference(q0, q1);
    return 0.5 * d.dot(weights.cwiseProduct(d));
  };
  def.lagrangian_gradient = [bundle, weights](const BundlePoint& q0, const BundlePoint& q1) {
    Vec d = weights.cwiseProduct(bundle.difference(q0, q1));
    return PointPairGradient{-d, d};
  };
  def.variational_constraints = [radius](const BundlePoint& q) {
    const double phi = q.base[0];
    Mat omega = Mat::Zero(2, 4);
    omega(0, 1) = 1.0;
    omega(0, 3) = -radius * std::cos(phi);
    omega(1, 2) = 1.0;
    omega(1, 3) = -radius * std::sin(phi);
    return omega;
  };
  def.kinematic_constraints = [bundle, radius](const BundlePoint& q0, const BundlePoint& q1) {
    Vec d = bundle.difference(q0, q1);
    const double mid = q0.base[0] + 0.5 * d[0];
    return Vec{{d[1] - radius * d[3] * std::cos(mid), d[2] - radius * d[3] * std::sin(mid)}};
  };
  DiscreteSystem sys(std::move(def));

  ContinuousConnection conn(bundle, [](const BundlePoint&) { return Mat::Zero(3, 1); });
  auto g = bundle.group_ptr();
  AffineDiscreteConnection dconn(
      bundle, [g](const Vec&, const Vec&) { return g->identity(); },
      [](const Vec&, const Vec&) { return AffineDiscreteConnection::ReducedJacobian{Mat::Zero(3, 1), Mat::Zero(3, 1)}; });

  auto complete = [bundle, radius](const BundlePoint& q0, const BundlePoint& q1) {
    const double dphi = angle_difference(q0.base[0], q1.base[0]);
    const double dtheta = angle_difference(q0.fiber.coords[2], q1.fiber.coords[2]);
    const double mid = q0.base[0] + 0.5 * dphi;
    Vec fiber{{q0.fiber.coords[0] + radius * dtheta * std::cos(mid),
               q0.fiber.coords[1] + radius * dtheta * std::sin(mid), q1.fiber.coords[2]}};
    return bundle.point(q1.base, fiber);
  };
  auto section = [radius](const BundlePoint& q) {
    return AlgebraElement{Vec{{radius * std::cos(q.base[0]), radius * std::sin(q.base[0]), 1.0}}};
  };
  auto ref = [bundle, radius](const BundlePoint& q0, const BundlePoint& q1, int steps) {
    return reference::rolling_disk(bundle, radius, q0, q1, steps);
  };
  return ExampleBundle{"disk",
                       {{"m", m}, {"A", radius}, {"I", inertia_roll}, {"J", inertia_turn}},
                       sys,
                       conn,
                       dconn,
                       ReductionMode::general,
                       {"phi", "x", "y", "theta"},
                       complete,
                       section,
                       std::nullopt,
                       ref};
}

ExampleBundle make_particle_3d(double m, double mu_z) {
  require_positive("m", m);
  if (!std::isfinite(mu_z)) throw ValidationError("parameter mu must be finite", mu_z);
  BundleSpec bundle(CoordinateLayout::lines(2), line_group());
  DiscreteSystem sys(particle_definition(bundle, m, 1));
  ContinuousConnection conn(bundle, [](const BundlePoint&) { return Mat::Zero(1, 2); });
  auto g = bundle.group_ptr();
  const double level = -mu_z / m;
  AffineDiscreteConnection dconn(
      bundle, [g, level](const Vec&, const Vec&) { return g->element(Vec::Constant(1, level)); },
      [](const Vec&, const Vec&) { return AffineDiscreteConnection::ReducedJacobian{Mat::Zero(1, 2), Mat::Zero(1, 2)}; });

  auto complete = [bundle](const BundlePoint& q0, const BundlePoint& q1) {
    Vec base = q1.base;
    base[1] = q0.base[1] + 0.5 * (q1.base[0] * q1.base[0] - q0.base[0] * q0.base[0]);
    return bundle.point(base, q1.fiber.coords);
  };
  auto section = [](const BundlePoint&) { return AlgebraElement{Vec::Ones(1)}; };
  auto ref = [bundle](const BundlePoint& q0, const BundlePoint& q1, int steps) {
    return reference::particle_3d(bundle, q0, q1, steps);
  };
  return ExampleBundle{"particle3d",
                       {{"m", m}, {"mu", mu_z}},
                       sys,
                       conn,
                       dconn,
                       ReductionMode::two_stage,
                       {"x", "y", "z"},
                       complete,
                       section,
                       AlgebraCovector{Vec::Constant(1, mu_z)},
                       ref};
}

const std::vector<std::string>& example_ids() {
  static const std::vector<std::string> ids{"particle2d", "disk", "particle3d"};
  return ids;
}

namespace {

void require_known(const std::string& id, const std::map<std::string, double>& params,
                   std::initializer_list<const char*> known) {
  for (const auto& [key, value] : params) {
    bool found = false;
    for (const char* k : known) found = found || key == k;
    if (!found) throw ValidationError("parameter " + key + " does not apply to " + id, value);
  }
}

}  // namespace

ExampleBundle make_example(const std::string& id, const std::map<std::string, double>& params) {
  if (id == "particle2d") require_known(id, params, {"m", "b"});
  if (id == "disk") require_known(id, params, {"m", "A", "I", "J"});
  if (id == "particle3d") require_known(id, params, {"m", "mu"});
  if (id == "particle2d") return make_particle_2d(param(params, "m", 1.0), param(params, "b", 0.0));
  if (id == "disk") {
    return make_rolling_disk(param(params, "m", 1.0), param(params, "A", 1.0), param(params, "I", 1.0),
                             param(params, "J", 1.0));
  }
  if (id == "particle3d") return make_particle_3d(param(params, "m", 1.0), param(params, "mu", 0.0));
  throw ValidationError("unknown example '" + id + "'", 0.0);
}

TwoStageReduction build_two_stage(const ExampleBundle& particle_3d, const SamplingOptions& sampling) {
  if (particle_3d.id != "particle3d" || !particle_3d.momentum_level) {
    throw ValidationError("two-stage reduction is defined for particle3d only", 0.0);
  }
  HorizontalReduction first =
      build_horizontal(particle_3d.system, particle_3d.connection, *particle_3d.momentum_level, sampling);

  BundleSpec middle(CoordinateLayout::lines(1), line_group());
  DiscreteSystem middle_system = first.base_system.with_bundle(middle);
  ContinuousConnection conn(middle, [](const BundlePoint& q) { return Mat::Constant(1, 1, q.base[0]); });
  auto second = std::make_shared<const ReducedSystem>(middle_system, conn, quadratic_connection(middle, 1.0));
  ChaplyginReduction chaplygin = build_chaplygin(*second, sampling);
  return {std::move(first), middle, second, std::move(chaplygin)};
}

TwoStageSolution solve_two_stage(const TwoStageReduction& stages, const BundlePoint& q0, const BundlePoint& q1,
                                 int steps, const SolverConfig& config) {
  const BundleSpec& base = stages.chaplygin.base_system.bundle();
  const BundleSpec& middle = stages.middle_bundle;
  auto to_base = [&](const BundlePoint& q) { return base.point(q.base.head(1), Vec(0)); };
  auto to_middle = [&](const BundlePoint& q) { return middle.point(q.base.head(1), q.base.tail(1)); };

  Trajectory traj = dla_trajectory(stages.chaplygin.base_system, to_base(q0), to_base(q1), steps, config);
  TwoStageSolution out;
  out.iterations = traj.iterations;
  for (const BundlePoint& p : traj.curve) out.base_curve.push_back(p.base);

  out.middle_curve = reconstruct_horizontal_lift_only(stages.second->discrete_connection(), out.base_curve,
                                                      to_middle(q0), to_middle(q1));
  std::vector<Vec> middle_coords;
  for (const BundlePoint& p : out.middle_curve) middle_coords.push_back(middle.coords(p));
  out.curve = reconstruct_horizontal_lift_only(stages.first.reduced->discrete_connection(), middle_coords, q0, q1);
  return out;
}

}  // namespace nonholorec

namespace nonholorec {

InitialPair default_initial_pair(const ExampleBundle& example) {
  const BundleSpec& b = example.system.bundle();
  if (example.id == "particle2d") {
    return {b.point(Vec::Zero(1), Vec::Zero(1)), b.point(Vec::Constant(1, 0.1), Vec::Constant(1, 0.005))};
  }
  if (example.id == "disk") {
    BundlePoint q0 = b.point(Vec::Zero(1), Vec::Zero(3));
    return {q0, example.complete_q1(q0, b.point(Vec::Constant(1, 0.1), Vec{{0.0, 0.0, 0.2}}))};
  }
  const double m = example.params.at("m");
  const double dz = example.params.at("mu") / m;
  return {b.point(Vec::Zero(2), Vec::Zero(1)), b.point(Vec{{0.1, 0.005}}, Vec::Constant(1, dz))};
}

}  // namespace nonholorec
