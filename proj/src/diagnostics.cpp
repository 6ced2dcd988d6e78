#include "nonholorec/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "nonholorec/dla_solver.hpp"
#include "nonholorec/linalg.hpp"
#include "nonholorec/reconstruction.hpp"

namespace nonholorec {

namespace {

double curve_distance(const BundleSpec& b, const DiscreteCurve& lhs, const DiscreteCurve& rhs) {
  if (lhs.size() != rhs.size()) return INFINITY;
  double worst = 0.0;
  for (std::size_t k = 0; k < lhs.size(); ++k) worst = std::max(worst, max_abs(b.difference(lhs[k], rhs[k])));
  return worst;
}

DiscreteCurve reduce_and_lift(const ExampleBundle& ex, const BundlePoint& q0, const BundlePoint& q1, int steps,
                              const SolverConfig& config) {
  ReducedSystem red(ex.system, ex.connection, ex.discrete_connection);
  const LieGroup& g = red.group();
  GroupElement theta0 = g.conjugate(g.inverse(q0.fiber), ex.discrete_connection.form(q0, q1));
  ReducedTrajectory rt = reduced_trajectory(red, q0.base, theta0, q1.base, steps, config);
  return reconstruct(ex.system, ex.discrete_connection, rt.curve, q0, q1);
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.passed(); });
}

double VerifyReport::worst() const {
  double worst = 0.0;
  for (const VerifyCheck& c : checks) worst = std::max(worst, c.value);
  return worst;
}

VerifyReport verify_example(const ExampleBundle& ex, const BundlePoint& q0, const BundlePoint& q1,
                            const VerifyOptions& options) {
  const DiscreteSystem& sys = ex.system;
  const BundleSpec& b = sys.bundle();
  const LieGroup& g = b.group();
  const AffineDiscreteConnection& dconn = ex.discrete_connection;
  const int n = options.steps;
  VerifyReport report{ex.id, {}};
  auto add = [&](const std::string& name, double value) {
    report.checks.push_back({name, std::isfinite(value) ? value : INFINITY, options.tolerance});
  };

  DiscreteCurve curve = dla_trajectory(sys, q0, q1, n, options.solver).curve;
  if (options.perturb != 0.0 && curve.size() > 2) {
    BundlePoint& mid = curve[curve.size() / 2];
    mid = b.advance(mid, Vec::Constant(b.dim(), options.perturb));
  }

  add("dla", max_dla_residual(sys, curve));
  add("reference", curve_distance(b, curve, ex.reference(q0, q1, n)));

  ReducedSystem red(sys, ex.connection, dconn);
  ReducedCurve projected = project_curve(dconn, curve);
  add("reduced_residual", max_reduced_residual(red, projected));

  DiscreteCurve lifted = reconstruct(sys, dconn, projected, q0, q1);
  add("round_trip", curve_distance(b, lifted, curve));
  add("closed_form_lift", curve_distance(b, lifted, reconstruct_closed_form(dconn, projected, q0)));

  GroupElement shift = g.element(Vec::LinSpaced(g.dim(), 0.3, 0.7));
  DiscreteCurve shifted = reconstruct(sys, dconn, projected, b.act(shift, q0), b.act(shift, q1));
  double equivariance = 0.0;
  for (std::size_t k = 0; k < lifted.size(); ++k) {
    equivariance = std::max(equivariance, max_abs(b.difference(b.act(shift, lifted[k]), shifted[k])));
  }
  add("equivariance", equivariance);

  DiscreteCurve from_reduced = reduce_and_lift(ex, q0, q1, n, options.solver);
  add("reduced_solve_dla", max_dla_residual(sys, from_reduced));
  add("reduced_solve_agreement", curve_distance(b, from_reduced, curve));

  if (ex.constrained_section) {
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < curve.size(); ++k) {
      worst = std::max(worst, std::abs(momentum_evolution_residual(sys, curve[k - 1], curve[k], curve[k + 1],
                                                                  ex.constrained_section)));
    }
    add("momentum_evolution", worst);
  }

  if (ex.id == "particle2d") {
    double worst = 0.0;
    for (double bp : {0.0, 0.5, 1.0}) {
      ExampleBundle variant = make_particle_2d(ex.params.at("m"), bp);
      worst = std::max(worst, curve_distance(b, reduce_and_lift(variant, q0, q1, n, options.solver), curve));
    }
    add("b_independence", worst);
  }

  if (ex.id == "particle3d" && ex.momentum_level) {
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 < curve.size(); ++k) {
      worst = std::max(worst, max_abs(momentum_map(sys, curve[k], curve[k + 1]).value.coords -
                                      ex.momentum_level->coords));
    }
    add("momentum_conservation", worst);
    TwoStageReduction stages = build_two_stage(ex);
    add("two_stage", curve_distance(b, solve_two_stage(stages, q0, q1, n, options.solver).curve, curve));
  }
  return report;
}

}  // namespace nonholorec
