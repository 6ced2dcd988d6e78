#include <cmath>

#include "nonholorec/dla_solver.hpp"
#include "nonholorec/error.hpp"
#include "nonholorec/examples.hpp"
#include "support.hpp"

using namespace nonholorec;
using nonholorec::testing::near;
using nonholorec::testing::Sampler;

namespace {

ReducedSystem reduced_of(const ExampleBundle& ex) {
  return ReducedSystem(ex.system, ex.connection, ex.discrete_connection);
}

GroupElement scalar(const ReducedSystem& red, double v) { return red.group().element(Vec::Constant(1, v)); }

TEST(Reduction, F1TildeParticle) {
  ExampleBundle ex = make_particle_2d(1.0, 1.0);
  BundlePoint q0 = ex.system.bundle().base_section(Vec::Zero(1));
  BundlePoint q1 = f1_tilde(ex.discrete_connection, q0, ex.system.bundle().group().element(Vec::Constant(1, 0.3)),
                            Vec::Ones(1));
  EXPECT_TRUE(near(ex.system.bundle().coords(q1), Vec{{1.0, 0.8}}, 1e-15));
}

TEST(Reduction, PhiPsiAreMutuallyInverse) {
  Sampler s(17);
  for (const ExampleBundle& ex : {make_particle_2d(1.0, 0.4), make_rolling_disk(), make_particle_3d(1.0, 0.3)}) {
    const BundleSpec& b = ex.system.bundle();
    const LieGroup& g = b.group();
    for (int i = 0; i < 20; ++i) {
      BundlePoint q0 = b.point(s.vec(b.base_dim()), s.vec(b.group_dim()));
      BundlePoint q1 = b.point(s.vec(b.base_dim()), s.vec(b.group_dim()));
      BundlePoint back = f1_tilde(ex.discrete_connection, q0, ex.discrete_connection.form(q0, q1), q1.base);
      EXPECT_TRUE(near(b, back, q1, 1e-12)) << ex.id;
      GroupElement w = g.element(s.vec(b.group_dim()));
      Vec r1 = s.vec(b.base_dim());
      GroupElement again = ex.discrete_connection.form(q0, f1_tilde(ex.discrete_connection, q0, w, r1));
      EXPECT_TRUE(near(g.chart_difference(w, again), Vec::Zero(b.group_dim()), 1e-12)) << ex.id;
    }
  }
}

TEST(Reduction, F2IsTheta1ForAbelianGroups) {
  ExampleBundle ex = make_particle_2d(1.0, 0.5);
  ReducedSystem red = reduced_of(ex);
  GroupElement t = f2_t(ex.discrete_connection, Vec::Constant(1, 0.1), scalar(red, 2.0), scalar(red, 0.3),
                        Vec::Constant(1, 0.4), scalar(red, -0.7), Vec::Constant(1, 0.2));
  EXPECT_NEAR(t.coords[0], -0.7, 1e-15);
}

TEST(Reduction, ProjectParticleCurve) {
  const double bp = 0.5;
  ExampleBundle ex = make_particle_2d(1.0, bp);
  const BundleSpec& b = ex.system.bundle();
  DiscreteCurve curve{b.point(Vec::Constant(1, 0.1), Vec::Constant(1, 0.3)),
                      b.point(Vec::Constant(1, 0.4), Vec::Constant(1, -0.2)),
                      b.point(Vec::Constant(1, 0.9), Vec::Constant(1, 0.6))};
  ReducedCurve rc = project_curve(ex.discrete_connection, curve);
  ASSERT_EQ(rc.steps(), 2);
  EXPECT_NEAR(rc.states[0].theta.coords[0], -0.5 - bp * (0.16 - 0.01) / 2, 1e-15);
  EXPECT_NEAR(rc.states[1].theta.coords[0], 0.8 - bp * (0.81 - 0.16) / 2, 1e-15);
  EXPECT_NEAR(rc.terminal_r[0], 0.9, 0.0);
}

TEST(Reduction, ProjectDiskCurveGivesIncrements) {
  ExampleBundle ex = make_rolling_disk();
  const BundleSpec& b = ex.system.bundle();
  DiscreteCurve curve{b.point(Vec::Constant(1, 0.1), Vec{{1.0, 2.0, 3.0}}),
                      b.point(Vec::Constant(1, 0.2), Vec{{1.5, 1.0, 3.5}})};
  ReducedCurve rc = project_curve(ex.discrete_connection, curve);
  EXPECT_TRUE(near(rc.states[0].theta.coords, Vec{{0.5, -1.0, 0.5}}, 1e-15));
}

TEST(Reduction, ConstantCurveProjectsToIdentity) {
  ExampleBundle ex = make_particle_2d(1.0, 0.7);
  BundlePoint q = ex.system.bundle().point(Vec::Constant(1, 0.5), Vec::Constant(1, 1.0));
  ReducedCurve rc = project_curve(ex.discrete_connection, {q, q, q});
  for (const ReducedState& s : rc.states) EXPECT_NEAR(s.theta.coords[0], 0.0, 0.0);
}

TEST(Reduction, ParticleReducedLagrangianAndConstraint) {
  Sampler s(23);
  for (double bp : {0.0, 0.5, 1.0}) {
    const double m = 1.7;
    ExampleBundle ex = make_particle_2d(m, bp);
    ReducedSystem red = reduced_of(ex);
    for (int i = 0; i < 10; ++i) {
      const double r0 = s(), r1 = s(), w = s();
      const double expected = m * (std::pow(r1 - r0, 2) + std::pow(w + bp * (r1 + r0) * (r1 - r0) / 2, 2)) / 2;
      EXPECT_NEAR(red.lagrangian(Vec::Constant(1, r0), scalar(red, w), Vec::Constant(1, r1)), expected, 1e-14);
      // Zero exactly when w = (1 - b)(r1^2 - r0^2)/2.
      const double level = (1 - bp) * (r1 * r1 - r0 * r0) / 2;
      EXPECT_NEAR(red.constraint(Vec::Constant(1, r0), scalar(red, level), Vec::Constant(1, r1))[0], 0.0, 1e-15);
      EXPECT_NEAR(std::abs(red.constraint(Vec::Constant(1, r0), scalar(red, w), Vec::Constant(1, r1))[0]),
                  std::abs(w - level), 1e-15);
    }
  }
}

TEST(Reduction, ReducedGradientMatchesCentralDifferences) {
  ExampleBundle ex = make_particle_2d(1.3, 0.4);
  ReducedSystem red = reduced_of(ex);
  const double r0 = 0.2, w = -0.3, r1 = 0.5, h = 1e-6;
  auto L = [&](double a, double t, double c) {
    return red.lagrangian(Vec::Constant(1, a), scalar(red, t), Vec::Constant(1, c));
  };
  ReducedLagrangianGradient g = red.lagrangian_gradient(Vec::Constant(1, r0), scalar(red, w), Vec::Constant(1, r1));
  EXPECT_NEAR(g.d_r0[0], (L(r0 + h, w, r1) - L(r0 - h, w, r1)) / (2 * h), 1e-8);
  EXPECT_NEAR(g.d_theta[0], (L(r0, w + h, r1) - L(r0, w - h, r1)) / (2 * h), 1e-8);
  EXPECT_NEAR(g.d_r1[0], (L(r0, w, r1 + h) - L(r0, w, r1 - h)) / (2 * h), 1e-8);
}

TEST(Reduction, ParticleReducedForce) {
  Sampler s(29);
  for (double bp : {0.0, 0.5, 1.0}) {
    const double m = 1.3;
    ExampleBundle ex = make_particle_2d(m, bp);
    ReducedSystem red = reduced_of(ex);
    for (int i = 0; i < 10; ++i) {
      const double r0 = s(), r1 = s(), w = s();
      ReducedForce f = red.force(Vec::Constant(1, r0), scalar(red, w), Vec::Constant(1, r1));
      const double k = m * (1 - bp) * (w + bp * (r1 * r1 - r0 * r0) / 2);
      EXPECT_NEAR(f.minus[0], -k * r0, 1e-8);
      EXPECT_NEAR(f.plus[0], k * r1, 1e-8);
    }
  }
}

TEST(Reduction, DiskHasNoReducedForce) {
  Sampler s(31);
  ExampleBundle ex = make_rolling_disk(1.0, 0.5, 0.3, 0.2);
  ReducedSystem red = reduced_of(ex);
  for (int i = 0; i < 20; ++i) {
    ReducedForce f = red.force(s.vec(1), red.group().element(s.vec(3)), s.vec(1));
    EXPECT_LT(max_abs(f.minus), 1e-10);
    EXPECT_LT(max_abs(f.plus), 1e-10);
  }
}

TEST(Reduction, ParticleBarPhi) {
  Sampler s(37);
  for (double bp : {0.0, 0.5, 1.0}) {
    const double m = 0.8;
    ExampleBundle ex = make_particle_2d(m, bp);
    ReducedSystem red = reduced_of(ex);
    for (int i = 0; i < 10; ++i) {
      const double r0 = s(), t0 = s(), r1 = s(), t1 = s(), r2 = s();
      const double u = -((r2 - r1) - (r1 - r0)) - r1 * (t1 - t0 + bp * ((r2 * r2 - r1 * r1) - (r1 * r1 - r0 * r0)) / 2);
      const double value = bar_phi_t(red, Vec::Constant(1, r0), scalar(red, t0), Vec::Constant(1, r1), scalar(red, t1),
                                     Vec::Constant(1, r2), Vec::Ones(1));
      EXPECT_NEAR(value, m * u, 1e-8);
    }
  }
}

TEST(Reduction, DiskBarPhiAndBarPsi) {
  const double m = 1.1, radius = 0.6, inertia_roll = 0.4, inertia_turn = 2.5;
  ExampleBundle ex = make_rolling_disk(m, radius, inertia_roll, inertia_turn);
  ReducedSystem red = reduced_of(ex);
  Sampler s(41);
  for (int i = 0; i < 10; ++i) {
    Vec r0 = s.vec(1), r1 = s.vec(1), r2 = s.vec(1);
    Vec t0 = s.vec(3), t1 = s.vec(3), xi = s.vec(3);
    const LieGroup& g = red.group();
    double phi = bar_phi_t(red, r0, g.element(t0), r1, g.element(t1), r2, Vec::Ones(1));
    EXPECT_NEAR(phi, inertia_turn * ((r1[0] - r0[0]) - (r2[0] - r1[0])), 1e-8);
    double psi = bar_psi_t(red, r0, g.element(t0), r1, g.element(t1), r2, AlgebraElement{xi});
    const double expected =
        m * (t0[0] - t1[0]) * xi[0] + m * (t0[1] - t1[1]) * xi[1] + inertia_roll * (t0[2] - t1[2]) * xi[2];
    EXPECT_NEAR(psi, expected, 1e-8);
  }
}

TEST(Reduction, ParticleReducedStepFollowsTheRecurrence) {
  for (double bp : {0.0, 0.5, 1.0}) {
    ExampleBundle ex = make_particle_2d(1.0, bp);
    ReducedSystem red = reduced_of(ex);
    const double r0 = 0.1, r1 = 0.3;
    GroupElement t0 = scalar(red, (1 - bp) * (r1 * r1 - r0 * r0) / 2);
    ReducedStepResult step = reduced_step(red, Vec::Constant(1, r0), t0, Vec::Constant(1, r1));
    const double r2 = step.r_next[0];
    // The scalar recurrence and the reduced constraint.
    EXPECT_NEAR((r2 - r1) - (r1 - r0) + r1 * ((r2 * r2 - r1 * r1) - (r1 * r1 - r0 * r0)) / 2, 0.0, 1e-13);
    EXPECT_NEAR(step.theta.coords[0], (1 - bp) * (r2 * r2 - r1 * r1) / 2, 1e-13);
    EXPECT_LE(step.iterations, 10);
  }
}

TEST(Reduction, DiskReducedTrajectoryMatchesClosedForm) {
  const double radius = 0.5;
  ExampleBundle ex = make_rolling_disk(2.0, radius, 0.7, 1.3);
  ReducedSystem red = reduced_of(ex);
  InitialPair ip = default_initial_pair(ex);
  const LieGroup& g = red.group();
  GroupElement t0 = g.conjugate(g.inverse(ip.q0.fiber), ex.discrete_connection.form(ip.q0, ip.q1));
  ReducedTrajectory rt = reduced_trajectory(red, ip.q0.base, t0, ip.q1.base, 40);
  const double dphi = angle_difference(ip.q0.base[0], ip.q1.base[0]);
  const double dtheta = angle_difference(ip.q0.fiber.coords[2], ip.q1.fiber.coords[2]);
  for (int k = 0; k < rt.curve.steps(); ++k) {
    const ReducedState& st = rt.curve.states[static_cast<std::size_t>(k)];
    const double angle = dphi * k + ip.q0.base[0] + dphi / 2;
    EXPECT_NEAR(angle_difference(ip.q0.base[0] + k * dphi, st.r[0]), 0.0, 1e-12);
    EXPECT_NEAR(st.theta.coords[2], dtheta, 1e-12);
    EXPECT_NEAR(st.theta.coords[0], radius * dtheta * std::cos(angle), 1e-12);
    EXPECT_NEAR(st.theta.coords[1], radius * dtheta * std::sin(angle), 1e-12);
  }
}

TEST(Reduction, ProjectedTrajectoriesSatisfyReducedEquations) {
  for (const ExampleBundle& ex : {make_particle_2d(1.0, 0.3), make_rolling_disk(), make_particle_3d(1.0, 0.05)}) {
    InitialPair ip = default_initial_pair(ex);
    Trajectory traj = dla_trajectory(ex.system, ip.q0, ip.q1, 30);
    ReducedSystem red = reduced_of(ex);
    EXPECT_LT(max_reduced_residual(red, project_curve(ex.discrete_connection, traj.curve)), 1e-9) << ex.id;
  }
}

TEST(Reduction, ReducedConstraintEquivalence) {
  // chi(q0, q1) = 0 iff chi_hat(projection) = 0: compare magnitudes on random pairs.
  Sampler s(43);
  for (const ExampleBundle& ex : {make_particle_2d(1.0, 0.3), make_rolling_disk(), make_particle_3d(1.0, 0.05)}) {
    const BundleSpec& b = ex.system.bundle();
    ReducedSystem red = reduced_of(ex);
    for (int i = 0; i < 20; ++i) {
      BundlePoint q0 = b.point(s.vec(b.base_dim()), s.vec(b.group_dim()));
      BundlePoint q1 = ex.complete_q1(q0, b.point(s.vec(b.base_dim()), s.vec(b.group_dim())));
      ReducedCurve rc = project_curve(ex.discrete_connection, {q0, q1});
      EXPECT_LT(max_abs(red.constraint(rc.states[0].r, rc.states[0].theta, rc.terminal_r)), 1e-12) << ex.id;
    }
  }
}

TEST(Reduction, VerticalConditionsMatchMomentumEvolution) {
  // On a disk trajectory both the vertical residual and the momentum evolution residual vanish;
  // after perturbing the middle point both become visible.
  ExampleBundle ex = make_rolling_disk();
  InitialPair ip = default_initial_pair(ex);
  DiscreteCurve curve = dla_trajectory(ex.system, ip.q0, ip.q1, 6).curve;
  ReducedSystem red = reduced_of(ex);
  Sampler s(47);
  auto residuals = [&](const DiscreteCurve& c) {
    ReducedCurve rc = project_curve(ex.discrete_connection, c);
    double vertical = 0.0, evolution = 0.0;
    for (int k = 1; k < rc.steps(); ++k) {
      const auto& a = rc.states[static_cast<std::size_t>(k - 1)];
      const auto& m = rc.states[static_cast<std::size_t>(k)];
      vertical = std::max(vertical, max_abs(red.residuals(a.r, a.theta, m.r, m.theta, rc.r(k + 1)).vertical));
      const double scale = s(0.5, 2.0);
      AlgebraSection section = [&](const BundlePoint& q) {
        return AlgebraElement{scale * ex.constrained_section(q).coords};
      };
      evolution = std::max(evolution, std::abs(momentum_evolution_residual(ex.system, c[static_cast<std::size_t>(k - 1)],
                                                                           c[static_cast<std::size_t>(k)],
                                                                           c[static_cast<std::size_t>(k + 1)], section)));
    }
    return std::pair{vertical, evolution};
  };
  auto [v0, e0] = residuals(curve);
  EXPECT_LT(v0, 1e-9);
  EXPECT_LT(e0, 1e-9);
  curve[3] = ex.system.bundle().advance(curve[3], Vec{{0.0, 1e-3, 0.0, 0.0}});
  auto [v1, e1] = residuals(curve);
  EXPECT_GT(v1, 1e-5);
  EXPECT_GT(e1, 1e-5);
}

TEST(Momentum, Particle3dFormula) {
  ExampleBundle ex = make_particle_3d(1.0, 0.0);
  const BundleSpec& b = ex.system.bundle();
  BundlePoint q0 = b.point(Vec{{0.1, 0.2}}, Vec::Zero(1));
  BundlePoint q1 = b.point(Vec{{0.3, 0.1}}, Vec::Constant(1, 0.25));
  MomentumValue j = momentum_map(ex.system, q0, q1);
  EXPECT_NEAR(j.value.coords[0], 0.25, 1e-15);
  EXPECT_NEAR(std::abs(j.restricted()[0]), 0.25, 1e-15);
  EXPECT_NEAR(momentum_map(ex.system, q0, q0).value.coords[0], 0.0, 0.0);
  ReducedSystem red = reduced_of(ex);
  EXPECT_NEAR(momentum_from_reduced(red, q0, q1).coords[0], 0.25, 1e-8);
}

TEST(Reduction, RejectsInconsistentInitialReducedData) {
  ExampleBundle ex = make_particle_2d(1.0, 0.0);
  ReducedSystem red = reduced_of(ex);
  EXPECT_THROW(reduced_trajectory(red, Vec::Zero(1), scalar(red, 1.0), Vec::Constant(1, 0.1), 5), ValidationError);
}

}  // namespace
