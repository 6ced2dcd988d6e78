#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nonholorec/momentum.hpp"
#include "nonholorec/specializations.hpp"

namespace nonholorec {

enum class ReductionMode { general, chaplygin, horizontal, two_stage };

std::string to_string(ReductionMode mode);
// Accepts "general", "chaplygin", "horizontal", "two-stage"; throws ValidationError otherwise.
ReductionMode parse_reduction_mode(const std::string& name);

// q0, q1 -> q0, ..., q_steps
using ReferenceTrajectory = std::function<DiscreteCurve(const BundlePoint&, const BundlePoint&, int)>;

struct ExampleBundle {
  std::string id;
  std::map<std::string, double> params;
  DiscreteSystem system;
  ContinuousConnection connection;
  AffineDiscreteConnection discrete_connection;
  ReductionMode mode;
  std::vector<std::string> coordinate_names;  // bundle order: base, then fiber
  // Replaces the dependent coordinates of q1 so that (q0, q1) satisfies the kinematic constraints.
  std::function<BundlePoint(const BundlePoint&, const BundlePoint&)> complete_q1;
  // Section of the constrained algebra bundle; empty when that bundle is zero.
  AlgebraSection constrained_section;
  std::optional<AlgebraCovector> momentum_level;
  ReferenceTrajectory reference;
};

// Q = R^2 with coordinates (x | y), G = R translating y.
//   L = m/2 (dx^2 + dy^2), D: dy = x dx, D_d: y1 - y0 = (x1^2 - x0^2)/2,
//   M(r) = r, A(r0, r1) = -b (r1^2 - r0^2)/2.
ExampleBundle make_particle_2d(double m = 1.0, double b = 0.0);

// Q = S^1 x (R^2 x S^1) with coordinates (phi | x, y, theta), rolling without slipping.
//   L = m/2 (dx^2 + dy^2) + I/2 dtheta^2 + J/2 dphi^2,
//   D_d: dx = A dtheta cos(phi_mid), dy = A dtheta sin(phi_mid), M = 0, A_d = e.
ExampleBundle make_rolling_disk(double m = 1.0, double radius = 1.0, double inertia_roll = 1.0,
                                double inertia_turn = 1.0);

// Q = R^3 with coordinates (x, y | z), G = R translating z, D: dy = x dx.
// The discrete connection is the momentum level J_d = mu_z, i.e. A = -mu_z / m.
ExampleBundle make_particle_3d(double m = 1.0, double mu_z = 0.0);

ExampleBundle make_example(const std::string& id, const std::map<std::string, double>& params);
const std::vector<std::string>& example_ids();

// Stage 1 removes the horizontal z symmetry at the momentum level; stage 2 treats the
// resulting (x | y) system as a Chaplygin system with A(r0, r1) = -(r1^2 - r0^2)/2.
struct TwoStageReduction {
  HorizontalReduction first;
  BundleSpec middle_bundle;  // (x | y)
  std::shared_ptr<const ReducedSystem> second;
  ChaplyginReduction chaplygin;
};

TwoStageReduction build_two_stage(const ExampleBundle& particle_3d, const SamplingOptions& sampling = {});

// Solves the final base system from (x0, x1) and lifts twice.
struct TwoStageSolution {
  std::vector<Vec> base_curve;  // x_k
  DiscreteCurve middle_curve;   // (x_k | y_k)
  DiscreteCurve curve;          // (x_k, y_k | z_k)
  std::vector<int> iterations;
};

TwoStageSolution solve_two_stage(const TwoStageReduction& stages, const BundlePoint& q0, const BundlePoint& q1,
                                 int steps, const SolverConfig& config = {});

}  // namespace nonholorec

namespace nonholorec {

// Initial pair used when none is supplied; always satisfies the kinematic constraints.
struct InitialPair {
  BundlePoint q0;
  BundlePoint q1;
};
InitialPair default_initial_pair(const ExampleBundle& example);

}  // namespace nonholorec
