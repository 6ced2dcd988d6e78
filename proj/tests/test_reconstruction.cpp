#include <cmath>

#include "nonholorec/dla_solver.hpp"
#include "nonholorec/error.hpp"
#include "nonholorec/examples.hpp"
#include "nonholorec/reconstruction.hpp"
#include "nonholorec/reference.hpp"
#include "support.hpp"

using namespace nonholorec;
using nonholorec::testing::near;
using nonholorec::testing::Sampler;

namespace {

void expect_curves_near(const BundleSpec& b, const DiscreteCurve& actual, const DiscreteCurve& expected, double tol) {
  ASSERT_EQ(actual.size(), expected.size());
  for (std::size_t k = 0; k < actual.size(); ++k) EXPECT_TRUE(near(b, actual[k], expected[k], tol)) << "k = " << k;
}

TEST(Reconstruction, ParticleLiftFollowsTheFormula) {
  // y_{k+1} = y_k + theta_k + b (r_{k+1}^2 - r_k^2)/2.
  const double bp = 0.5;
  ExampleBundle ex = make_particle_2d(1.0, bp);
  const BundleSpec& b = ex.system.bundle();
  const LieGroup& g = b.group();
  ReducedCurve rc;
  rc.states = {{Vec::Constant(1, 0.1), g.element(Vec::Constant(1, 0.2))},
               {Vec::Constant(1, 0.3), g.element(Vec::Constant(1, -0.4))}};
  rc.terminal_r = Vec::Constant(1, 0.6);
  BundlePoint q0 = b.point(Vec::Constant(1, 0.1), Vec::Constant(1, 1.0));
  DiscreteCurve curve = reconstruct(ex.system, ex.discrete_connection, rc, q0);
  const double y1 = 1.0 + 0.2 + bp * (0.09 - 0.01) / 2;
  const double y2 = y1 - 0.4 + bp * (0.36 - 0.09) / 2;
  EXPECT_TRUE(near(b.coords(curve[1]), Vec{{0.3, y1}}, 1e-15));
  EXPECT_TRUE(near(b.coords(curve[2]), Vec{{0.6, y2}}, 1e-15));
  expect_curves_near(b, reconstruct_closed_form(ex.discrete_connection, rc, q0), curve, 1e-15);
}

TEST(Reconstruction, ConstantReducedCurveGivesConstantLift) {
  ExampleBundle ex = make_rolling_disk();
  const BundleSpec& b = ex.system.bundle();
  BundlePoint q0 = b.point(Vec::Constant(1, 0.3), Vec{{1.0, -2.0, 0.5}});
  ReducedCurve rc;
  for (int k = 0; k < 4; ++k) rc.states.push_back({q0.base, b.group().identity()});
  rc.terminal_r = q0.base;
  for (const BundlePoint& q : reconstruct(ex.system, ex.discrete_connection, rc, q0)) {
    EXPECT_TRUE(near(b, q, q0, 0.0));
  }
}

TEST(Reconstruction, DiskMatchesSineQuotient) {
  const double radius = 0.8;
  ExampleBundle ex = make_rolling_disk(1.0, radius, 1.0, 1.0);
  const BundleSpec& b = ex.system.bundle();
  InitialPair ip = default_initial_pair(ex);
  const int n = 50;
  ReducedCurve rc;
  const double dphi = angle_difference(ip.q0.base[0], ip.q1.base[0]);
  for (int k = 0; k < n; ++k) {
    rc.states.push_back({Vec::Constant(1, wrap_angle(ip.q0.base[0] + k * dphi)),
                         b.group().element(reference::rolling_disk_theta(radius, ip.q0, ip.q1, k))});
  }
  rc.terminal_r = Vec::Constant(1, wrap_angle(ip.q0.base[0] + n * dphi));
  DiscreteCurve curve = reconstruct(ex.system, ex.discrete_connection, rc, ip.q0, ip.q1);
  expect_curves_near(b, curve, reference::rolling_disk(b, radius, ip.q0, ip.q1, n), 1e-12);
}

TEST(Reconstruction, RoundTripRecoversSolvedTrajectories) {
  for (const ExampleBundle& ex : {make_particle_2d(1.0, 0.3), make_rolling_disk(), make_particle_3d(1.0, 0.05)}) {
    InitialPair ip = default_initial_pair(ex);
    Trajectory t = dla_trajectory(ex.system, ip.q0, ip.q1, 40);
    ReducedCurve rc = project_curve(ex.discrete_connection, t.curve);
    expect_curves_near(ex.system.bundle(), reconstruct(ex.system, ex.discrete_connection, rc, ip.q0, ip.q1), t.curve,
                       1e-12);
  }
}

TEST(Reconstruction, LiftIsEquivariant) {
  Sampler s(61);
  ExampleBundle ex = make_rolling_disk();
  const BundleSpec& b = ex.system.bundle();
  InitialPair ip = default_initial_pair(ex);
  ReducedCurve rc = project_curve(ex.discrete_connection, dla_trajectory(ex.system, ip.q0, ip.q1, 20).curve);
  GroupElement g = b.group().element(s.vec(3));
  DiscreteCurve plain = reconstruct(ex.system, ex.discrete_connection, rc, ip.q0);
  DiscreteCurve moved = reconstruct(ex.system, ex.discrete_connection, rc, b.act(g, ip.q0));
  for (std::size_t k = 0; k < plain.size(); ++k) EXPECT_TRUE(near(b, moved[k], b.act(g, plain[k]), 1e-12));
}

TEST(Reconstruction, RejectsInconsistentData) {
  ExampleBundle ex = make_particle_2d(1.0, 0.0);
  const BundleSpec& b = ex.system.bundle();
  InitialPair ip = default_initial_pair(ex);
  ReducedCurve rc = project_curve(ex.discrete_connection, dla_trajectory(ex.system, ip.q0, ip.q1, 5).curve);
  // q0 over the wrong base point.
  EXPECT_THROW(reconstruct(ex.system, ex.discrete_connection, rc, b.point(Vec::Constant(1, 0.5), Vec::Zero(1))),
               ValidationError);
  // q1 that disagrees with theta_0.
  BundlePoint wrong = b.advance(ip.q1, Vec{{0.0, 1e-3}});
  EXPECT_THROW(reconstruct(ex.system, ex.discrete_connection, rc, ip.q0, wrong), ValidationError);
  // Reduced velocity off the constraint level.
  rc.states[0].theta = b.group().element(Vec::Constant(1, 0.3));
  EXPECT_THROW(reconstruct(ex.system, ex.discrete_connection, rc, ip.q0, ip.q1), ValidationError);
}

TEST(Reconstruction, HorizontalLiftOnly) {
  ExampleBundle ex = make_particle_2d(1.0, 1.0);
  const BundleSpec& b = ex.system.bundle();
  std::vector<Vec> base{Vec::Constant(1, 0.0), Vec::Constant(1, 0.5), Vec::Constant(1, 1.0)};
  BundlePoint q0 = b.point(Vec::Zero(1), Vec::Constant(1, 2.0));
  DiscreteCurve curve = reconstruct_horizontal_lift_only(ex.discrete_connection, base, q0);
  EXPECT_TRUE(near(b.coords(curve[1]), Vec{{0.5, 2.125}}, 1e-15));
  EXPECT_TRUE(near(b.coords(curve[2]), Vec{{1.0, 2.5}}, 1e-15));
  EXPECT_NO_THROW(reconstruct_horizontal_lift_only(ex.discrete_connection, base, q0, curve[1]));
  EXPECT_THROW(reconstruct_horizontal_lift_only(ex.discrete_connection, base, q0, b.advance(curve[1], Vec{{0.0, 0.1}})),
               ValidationError);
  EXPECT_THROW(reconstruct_horizontal_lift_only(ex.discrete_connection, base, b.point(Vec::Ones(1), Vec::Zero(1))),
               ValidationError);
}

}  // namespace
