#include "nonholorec/reconstruction.hpp"

#include <sstream>

#include "nonholorec/error.hpp"
#include "nonholorec/linalg.hpp"

namespace nonholorec {

namespace {

void require(bool ok, const std::string& what, double residual) {
  if (ok) return;
  std::ostringstream msg;
  msg << what << " (residual " << residual << ")";
  throw ValidationError(msg.str(), residual);
}

void check_start(const BundleSpec& b, const Vec& r0, const BundlePoint& q0, double tol) {
  b.check(q0);
  double gap = max_abs(b.base().difference(r0, q0.base));
  require(gap <= tol, "initial point does not project to r_0", gap);
}

}  // namespace

DiscreteCurve reconstruct(const DiscreteSystem& sys, const AffineDiscreteConnection& dconn,
                          const ReducedCurve& reduced, const BundlePoint& q0, const std::optional<BundlePoint>& q1,
                          double tol) {
  const BundleSpec& b = dconn.bundle();
  const LieGroup& g = b.group();
  if (reduced.steps() < 1) throw DimensionError("reduced curve has no steps");
  check_start(b, reduced.r(0), q0, tol);

  if (q1) {
    b.check(*q1);
    double base_gap = max_abs(b.base().difference(reduced.r(1), q1->base));
    require(base_gap <= tol, "second point does not project to r_1", base_gap);
    double chi = max_abs(sys.constraint_residual(q0, *q1));
    require(chi <= tol, "initial pair violates the kinematic constraints", chi);
    GroupElement theta0 = g.conjugate(g.inverse(q0.fiber), dconn.form(q0, *q1));
    double mismatch = max_abs(g.chart_difference(reduced.states.front().theta, theta0));
    require(mismatch <= tol, "initial pair disagrees with theta_0", mismatch);
  }

  DiscreteCurve out{q0};
  out.reserve(static_cast<std::size_t>(reduced.steps()) + 1);
  for (int k = 0; k < reduced.steps(); ++k) {
    const BundlePoint& qk = out.back();
    GroupElement h = b.tau(qk, b.base_section(qk.base));
    GroupElement w = g.conjugate(h, reduced.states[static_cast<std::size_t>(k)].theta);
    out.push_back(f1_tilde(dconn, qk, w, reduced.r(k + 1)));
  }
  return out;
}

DiscreteCurve reconstruct_closed_form(const AffineDiscreteConnection& dconn, const ReducedCurve& reduced,
                                      const BundlePoint& q0) {
  const BundleSpec& b = dconn.bundle();
  const LieGroup& g = b.group();
  DiscreteCurve out{q0};
  out.reserve(static_cast<std::size_t>(reduced.steps()) + 1);
  for (int k = 0; k < reduced.steps(); ++k) {
    const BundlePoint& qk = out.back();
    const Vec& r_next = reduced.r(k + 1);
    GroupElement a = dconn.reduced_form(qk.base, r_next);
    GroupElement h = g.compose(g.compose(qk.fiber, reduced.states[static_cast<std::size_t>(k)].theta), g.inverse(a));
    out.push_back(b.point(r_next, h.coords));
  }
  return out;
}

DiscreteCurve reconstruct_horizontal_lift_only(const AffineDiscreteConnection& dconn, const std::vector<Vec>& base_curve,
                                               const BundlePoint& q0, const std::optional<BundlePoint>& q1,
                                               double tol) {
  const BundleSpec& b = dconn.bundle();
  if (base_curve.size() < 2) throw DimensionError("base curve needs at least two points");
  check_start(b, base_curve.front(), q0, tol);

  DiscreteCurve out{q0};
  out.reserve(base_curve.size());
  for (std::size_t k = 1; k < base_curve.size(); ++k) out.push_back(dconn.horizontal_lift(out.back(), base_curve[k]));

  if (q1) {
    double gap = max_abs(b.difference(out[1], *q1));
    require(gap <= tol, "second point is not the horizontal lift of the first", gap);
  }
  return out;
}

}  // namespace nonholorec
