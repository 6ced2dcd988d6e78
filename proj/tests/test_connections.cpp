#include <cmath>

#include "nonholorec/examples.hpp"
#include "support.hpp"

using namespace nonholorec;
using nonholorec::testing::near;
using nonholorec::testing::Sampler;

namespace {

// Particle connection form y1 - y0 - b (x1 + x0)(x1 - x0)/2, evaluated by hand.
double particle_form(double b, double x0, double y0, double x1, double y1) {
  return y1 - y0 - b * (x1 + x0) * (x1 - x0) / 2.0;
}

TEST(ContinuousConnection, ParticleLiftAndOneForm) {
  ExampleBundle ex = make_particle_2d();
  const BundleSpec& b = ex.system.bundle();
  BundlePoint q = b.point(Vec::Constant(1, 1.5), Vec::Constant(1, -0.3));
  EXPECT_TRUE(near(ex.connection.horizontal_lift(q, Vec::Ones(1)).coords, Vec{{1.0, 1.5}}, 0.0));
  EXPECT_TRUE(near(ex.connection.horizontal_lift(q, Vec::Zero(1)).coords, Vec::Zero(2), 0.0));
  // A(xdot d/dx + ydot d/dy) = ydot - xdot x
  EXPECT_DOUBLE_EQ(ex.connection.one_form({q, Vec{{2.0, 5.0}}}).coords[0], 5.0 - 2.0 * 1.5);
  EXPECT_DOUBLE_EQ(ex.connection.one_form(b.infinitesimal_generator(AlgebraElement{Vec::Constant(1, 0.7)}, q)).coords[0],
                   0.7);
}

TEST(ContinuousConnection, HorizontalProjection) {
  ExampleBundle ex = make_particle_2d();
  const BundleSpec& b = ex.system.bundle();
  BundlePoint q = b.point(Vec::Constant(1, 1.0), Vec::Zero(1));
  EXPECT_TRUE(near(ex.connection.horizontal_projection({q, Vec{{0.0, 1.0}}}).coords, Vec::Zero(2), 0.0));
  // d/dx has connection value -1, so its horizontal part is d/dx + d/dy.
  EXPECT_TRUE(near(ex.connection.horizontal_projection({q, Vec{{1.0, 0.0}}}).coords, Vec{{1.0, 1.0}}, 0.0));
  TangentVector v{q, Vec{{0.3, -2.0}}};
  TangentVector once = ex.connection.horizontal_projection(v);
  EXPECT_TRUE(near(ex.connection.horizontal_projection(once).coords, once.coords, 1e-15));
}

TEST(ContinuousConnection, DiskLiftIsPhiDirection) {
  ExampleBundle ex = make_rolling_disk();
  const BundleSpec& b = ex.system.bundle();
  BundlePoint q = b.point(Vec::Constant(1, 1.0), Vec{{1.0, 2.0, 3.0}});
  EXPECT_TRUE(near(ex.connection.horizontal_lift(q, Vec::Constant(1, 2.0)).coords, Vec{{2.0, 0.0, 0.0, 0.0}}, 0.0));
}

TEST(ContinuousConnection, LiftIsHorizontalAndProjectsBack) {
  Sampler s;
  for (const ExampleBundle& ex : {make_particle_2d(), make_rolling_disk(), make_particle_3d()}) {
    const BundleSpec& b = ex.system.bundle();
    for (int i = 0; i < 20; ++i) {
      BundlePoint q = b.point(s.vec(b.base_dim()), s.vec(b.group_dim()));
      Vec dr = s.vec(b.base_dim());
      TangentVector lift = ex.connection.horizontal_lift(q, dr);
      EXPECT_TRUE(near(lift.base_part(), dr, 0.0));
      EXPECT_TRUE(near(ex.connection.one_form(lift).coords, Vec::Zero(b.group_dim()), 1e-12));
    }
  }
}

TEST(ContinuousConnection, SplittingHoldsForEveryExample) {
  for (const ExampleBundle& ex : {make_particle_2d(), make_rolling_disk(), make_particle_3d()}) {
    InitialPair ip = default_initial_pair(ex);
    SplittingReport report = check_splitting(ex.system, ex.connection, ip.q1);
    EXPECT_TRUE(report.holds()) << ex.id;
    EXPECT_EQ(report.distribution_dim, ex.system.distribution_dim());
  }
}

TEST(DiscreteConnection, ParticleFormMatchesHandFormula) {
  for (double bp : {0.0, 0.5, 1.0}) {
    ExampleBundle ex = make_particle_2d(1.0, bp);
    const BundleSpec& b = ex.system.bundle();
    BundlePoint q0 = b.point(Vec::Constant(1, 0.3), Vec::Constant(1, 0.2));
    BundlePoint q1 = b.point(Vec::Constant(1, -0.7), Vec::Constant(1, 1.1));
    EXPECT_NEAR(ex.discrete_connection.form(q0, q1).coords[0], particle_form(bp, 0.3, 0.2, -0.7, 1.1), 1e-15);
  }
  ExampleBundle one = make_particle_2d(1.0, 1.0);
  const BundleSpec& b = one.system.bundle();
  EXPECT_DOUBLE_EQ(
      one.discrete_connection.form(b.point(Vec::Zero(1), Vec::Zero(1)), b.point(Vec::Ones(1), Vec::Constant(1, 2.0)))
          .coords[0],
      1.5);
}

TEST(DiscreteConnection, HorizontalLiftExamples) {
  ExampleBundle particle = make_particle_2d(1.0, 1.0);
  const BundleSpec& pb = particle.system.bundle();
  BundlePoint lift = particle.discrete_connection.horizontal_lift(pb.point(Vec::Zero(1), Vec::Zero(1)), Vec::Ones(1));
  EXPECT_TRUE(near(pb.coords(lift), Vec{{1.0, 0.5}}, 1e-15));

  ExampleBundle disk = make_rolling_disk();
  const BundleSpec& db = disk.system.bundle();
  BundlePoint q0 = db.point(Vec::Constant(1, 0.4), Vec{{1.0, 2.0, 3.0}});
  BundlePoint disk_lift = disk.discrete_connection.horizontal_lift(q0, Vec::Constant(1, 0.9));
  EXPECT_TRUE(near(db.coords(disk_lift), Vec{{0.9, 1.0, 2.0, 3.0}}, 0.0));

  BundlePoint q = pb.point(Vec::Constant(1, 0.4), Vec::Constant(1, -2.0));
  EXPECT_TRUE(near(pb, particle.discrete_connection.horizontal_lift(q, q.base), q, 0.0));
  EXPECT_TRUE(near(particle.discrete_connection.level(q).coords, Vec::Zero(1), 0.0));
}

TEST(DiscreteConnection, LevelOfAffineConnection) {
  // A(r, r) = -mu/m for the momentum-level connection, so the level is its inverse.
  ExampleBundle ex = make_particle_3d(2.0, 0.5);
  const BundleSpec& b = ex.system.bundle();
  BundlePoint q = b.point(Vec{{0.1, 0.2}}, Vec::Constant(1, 0.3));
  EXPECT_NEAR(ex.discrete_connection.level(q).coords[0], 0.25, 1e-15);
}

TEST(DiscreteConnection, FormDerivativeMatchesCentralDifferences) {
  Sampler s(11);
  for (const ExampleBundle& ex : {make_particle_2d(1.0, 0.3), make_rolling_disk(), make_particle_3d(1.0, 0.2)}) {
    const BundleSpec& b = ex.system.bundle();
    for (int i = 0; i < 20; ++i) {
      BundlePoint q0 = b.point(s.vec(b.base_dim()), s.vec(b.group_dim()));
      BundlePoint q1 = b.point(s.vec(b.base_dim()), s.vec(b.group_dim()));
      Vec dq0 = s.vec(b.dim());
      Vec dq1 = s.vec(b.dim());
      GroupTangent exact = ex.discrete_connection.form_derivative(q0, q1, dq0, dq1);
      GroupTangent numeric = ex.discrete_connection.numeric_form_derivative(q0, q1, dq0, dq1);
      EXPECT_TRUE(near(exact.coords, numeric.coords, 1e-8)) << ex.id;
    }
  }
}

TEST(DiscreteConnection, AnalyticAndNumericReducedJacobians) {
  ExampleBundle ex = make_particle_2d(1.0, 0.7);
  Vec r0 = Vec::Constant(1, 0.3);
  Vec r1 = Vec::Constant(1, -0.4);
  auto exact = ex.discrete_connection.reduced_jacobian(r0, r1);
  auto numeric = ex.discrete_connection.numeric_reduced_jacobian(r0, r1);
  EXPECT_NEAR(exact.d_r0(0, 0), 0.7 * 0.3, 1e-15);
  EXPECT_NEAR(exact.d_r1(0, 0), 0.7 * 0.4, 1e-15);
  EXPECT_NEAR(numeric.d_r0(0, 0), exact.d_r0(0, 0), 1e-8);
  EXPECT_NEAR(numeric.d_r1(0, 0), exact.d_r1(0, 0), 1e-8);
}

TEST(MixedCurvature, ParticleFormula) {
  Sampler s(3);
  for (double bp : {0.0, 0.5, 1.0}) {
    ExampleBundle ex = make_particle_2d(1.0, bp);
    const BundleSpec& b = ex.system.bundle();
    for (int i = 0; i < 10; ++i) {
      BundlePoint q0 = b.point(s.vec(1), s.vec(1));
      BundlePoint q1 = b.point(s.vec(1), s.vec(1));
      const double c0 = s();
      const double c1 = s();
      // Horizontal inputs with base components c0, c1; vertical parts must not matter.
      Vec dq0 = ex.connection.horizontal_lift(q0, Vec::Constant(1, c0)).coords + Vec{{0.0, s()}};
      Vec dq1 = ex.connection.horizontal_lift(q1, Vec::Constant(1, c1)).coords + Vec{{0.0, s()}};
      MixedCurvature bm = mixed_curvature(ex.connection, ex.discrete_connection, q0, q1, dq0, dq1);
      const double expected = (1.0 - bp) * (c1 * q1.base[0] - c0 * q0.base[0]);
      EXPECT_NEAR(bm.total()[0], expected, 1e-12);
    }
  }
}

TEST(MixedCurvature, VanishesForDisk) {
  Sampler s(5);
  ExampleBundle ex = make_rolling_disk(1.0, 0.5, 1.0, 1.0);
  const BundleSpec& b = ex.system.bundle();
  for (int i = 0; i < 20; ++i) {
    BundlePoint q0 = b.point(s.vec(1), s.vec(3));
    BundlePoint q1 = b.point(s.vec(1), s.vec(3));
    MixedCurvature bm = mixed_curvature(ex.connection, ex.discrete_connection, q0, q1, s.vec(4), s.vec(4));
    EXPECT_LT(max_abs(bm.total()), 1e-14);
  }
}

TEST(MixedCurvature, BilinearInTheVariations) {
  ExampleBundle ex = make_particle_2d(1.0, 0.25);
  const BundleSpec& b = ex.system.bundle();
  BundlePoint q0 = b.point(Vec::Constant(1, 0.3), Vec::Zero(1));
  BundlePoint q1 = b.point(Vec::Constant(1, 0.6), Vec::Zero(1));
  Vec u{{1.0, 0.2}};
  Vec v{{-0.5, 0.7}};
  auto value = [&](const Vec& d0, const Vec& d1) {
    return mixed_curvature(ex.connection, ex.discrete_connection, q0, q1, d0, d1).total()[0];
  };
  EXPECT_NEAR(value(u + 2 * v, u), value(u, u) + 2 * value(v, Vec::Zero(2)), 1e-6);
}

}  // namespace
