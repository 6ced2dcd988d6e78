#include "nonholorec/specializations.hpp"

#include <cmath>
#include <deque>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>

#include "nonholorec/error.hpp"
#include "nonholorec/linalg.hpp"

namespace nonholorec {

namespace {

constexpr double kRegularityFloor = 1e-8;
constexpr double kSectionTolerance = 1e-10;
constexpr double kDifferenceStep = 1e-6;

struct Sample {
  BundlePoint q0;
  Vec r1;
};

std::vector<Sample> draw_samples(const BundleSpec& b, const SamplingOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto coordinate = [&](bool circle) { return circle ? std::numbers::pi * (1.0 + unit(rng)) : opts.spread * unit(rng); };
  const LieGroup& g = b.group();
  std::vector<Sample> out;
  for (int i = 0; i < opts.samples; ++i) {
    Vec r0(b.base_dim()), r1(b.base_dim());
    for (int j = 0; j < b.base_dim(); ++j) {
      r0[j] = coordinate(b.base().is_circle(j));
      r1[j] = r0[j] + opts.step * unit(rng);
    }
    Vec fiber(b.group_dim());
    for (int j = 0; j < b.group_dim(); ++j) fiber[j] = opts.spread * unit(rng);
    out.push_back({{b.base().normalize(r0), g.element(fiber)}, b.base().normalize(r1)});
  }
  return out;
}

[[noreturn]] void fail(const std::string& what, double figure) {
  std::ostringstream msg;
  msg << what << " (" << figure << ")";
  throw ValidationError(msg.str(), figure);
}

// Central difference of a vector function along the chart of `g`.
template <class F>
Mat group_jacobian(const LieGroup& g, const GroupElement& at, F&& f) {
  const int n = g.dim();
  Mat out;
  for (int j = 0; j < n; ++j) {
    Vec e = Vec::Zero(n);
    e[j] = kDifferenceStep * (1.0 + std::abs(at.coords[j]));
    Vec col = (f(g.chart_advance(at, e)) - f(g.chart_advance(at, -e))) / (2.0 * e[j]);
    if (j == 0) out.resize(col.size(), n);
    out.col(j) = col;
  }
  return out;
}

template <class F>
Mat base_jacobian(const CoordinateLayout& base, const Vec& at, F&& f) {
  const int n = base.dim();
  Mat out;
  for (int j = 0; j < n; ++j) {
    Vec e = Vec::Zero(n);
    e[j] = kDifferenceStep * (1.0 + std::abs(at[j]));
    Vec col = (f(base.advance(at, e)) - f(base.advance(at, -e))) / (2.0 * e[j]);
    if (j == 0) out.resize(col.size(), n);
    out.col(j) = col;
  }
  return out;
}

// Solves J_d(q0, (r1, f)) = mu for the fiber f, and differentiates the
// resulting reduced form A(r0, r1) = f^-1 (q0 = (r0, e)) implicitly.
class MomentumLevelSolver {
 public:
  MomentumLevelSolver(DiscreteSystem sys, AlgebraCovector mu) : sys_(std::move(sys)), mu_(std::move(mu)) {
    if (mu_.coords.size() != sys_.bundle().group_dim()) throw DimensionError("momentum level has the wrong size");
  }

  Vec momentum(const BundlePoint& q0, const BundlePoint& q1) const {
    return -(sys_.bundle().generator_matrix(q0).transpose() * sys_.lagrangian_gradient(q0, q1).d1);
  }

  GroupElement solve_fiber(const BundlePoint& q0, const Vec& r1) const {
    const LieGroup& g = sys_.bundle().group();
    const GroupElement start = q0.fiber;
    auto residual = [&](const Vec& z) { return Vec(momentum(q0, {r1, g.chart_advance(start, z)}) - mu_.coords); };
    SolverConfig config;
    config.residual_tolerance = 1e-13 * (1.0 + max_abs(mu_.coords));
    try {
      NewtonResult sol = solve_newton(residual, Vec::Zero(g.dim()), start.coords, config);
      return g.chart_advance(start, sol.x);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError(std::string("momentum level not reached: ") + e.what(), e.iterations(), e.residual());
    }
  }

  Mat fiber_sensitivity(const BundlePoint& q0, const Vec& r1, const GroupElement& f) const {
    return group_jacobian(sys_.bundle().group(), f,
                          [&](const GroupElement& x) { return momentum(q0, {r1, x}); });
  }

  GroupElement reduced_form(const Vec& r0, const Vec& r1) const {
    if (auto hit = lookup(r0, r1)) return *hit;
    const LieGroup& g = sys_.bundle().group();
    GroupElement a = g.inverse(solve_fiber(sys_.bundle().base_section(r0), r1));
    store(r0, r1, a);
    return a;
  }

  AffineDiscreteConnection::ReducedJacobian jacobian(const Vec& r0, const Vec& r1) const {
    const BundleSpec& b = sys_.bundle();
    const LieGroup& g = b.group();
    GroupElement a = reduced_form(r0, r1);
    GroupElement u = g.inverse(a);
    Mat j_u = fiber_sensitivity(b.base_section(r0), r1, u);
    Mat j_r0 = base_jacobian(b.base(), r0, [&](const Vec& x) { return momentum(b.base_section(x), {r1, u}); });
    Mat j_r1 = base_jacobian(b.base(), r1, [&](const Vec& x) { return momentum(b.base_section(r0), {x, u}); });
    Eigen::FullPivLU<Mat> lu(j_u);
    Mat du_r0 = -lu.solve(j_r0);
    Mat du_r1 = -lu.solve(j_r1);
    AffineDiscreteConnection::ReducedJacobian out{Mat(g.dim(), b.base_dim()), Mat(g.dim(), b.base_dim())};
    for (int j = 0; j < b.base_dim(); ++j) {
      out.d_r0.col(j) = g.inverse_tangent({u, du_r0.col(j)}).coords;
      out.d_r1.col(j) = g.inverse_tangent({u, du_r1.col(j)}).coords;
    }
    return out;
  }

 private:
  struct Entry {
    Vec r0;
    Vec r1;
    GroupElement a;
  };
  static constexpr std::size_t kCacheSize = 64;
  static constexpr double kKeyTolerance = 1e-12;

  std::optional<GroupElement> lookup(const Vec& r0, const Vec& r1) const {
    std::lock_guard<std::mutex> lock(mutex_);
    for (const Entry& e : cache_) {
      if (max_abs(e.r0 - r0) <= kKeyTolerance && max_abs(e.r1 - r1) <= kKeyTolerance) return e.a;
    }
    return std::nullopt;
  }

  void store(const Vec& r0, const Vec& r1, const GroupElement& a) const {
    std::lock_guard<std::mutex> lock(mutex_);
    cache_.push_front({r0, r1, a});
    if (cache_.size() > kCacheSize) cache_.pop_back();
  }

  DiscreteSystem sys_;
  AlgebraCovector mu_;
  mutable std::mutex mutex_;
  mutable std::deque<Entry> cache_;
};

SystemDefinition base_definition(const std::shared_ptr<const ReducedSystem>& red) {
  const BundleSpec base = base_bundle(red->bundle());
  SystemDefinition def{base, nullptr, nullptr, nullptr, nullptr, std::nullopt};
  def.lagrangian = [red](const BundlePoint& p0, const BundlePoint& p1) {
    return red->lagrangian(p0.base, red->group().identity(), p1.base);
  };
  def.lagrangian_gradient = [red](const BundlePoint& p0, const BundlePoint& p1) {
    ReducedLagrangianGradient d = red->lagrangian_gradient(p0.base, red->group().identity(), p1.base);
    return PointPairGradient{d.d_r0, d.d_r1};
  };
  def.force = DiscreteForce{[red](const BundlePoint& p0, const BundlePoint& p1) {
                              return red->force(p0.base, red->group().identity(), p1.base).minus;
                            },
                            [red](const BundlePoint& p0, const BundlePoint& p1) {
                              return red->force(p0.base, red->group().identity(), p1.base).plus;
                            }};
  return def;
}

}  // namespace

BundleSpec base_bundle(const BundleSpec& bundle) { return BundleSpec(bundle.base(), AbelianGroup::trivial()); }

RegularityFigures regularity(const DiscreteSystem& sys, const BundlePoint& q0, const BundlePoint& q1) {
  const BundleSpec& b = sys.bundle();
  const int n = b.dim();
  Mat cross(n, n);
  Vec x1 = b.coords(q1);
  for (int j = 0; j < n; ++j) {
    Vec e = Vec::Zero(n);
    e[j] = kDifferenceStep * (1.0 + std::abs(x1[j]));
    cross.col(j) = (sys.lagrangian_gradient(q0, b.advance(q1, e)).d1 - sys.lagrangian_gradient(q0, b.advance(q1, -e)).d1) /
                   (2.0 * e[j]);
  }
  Mat vertical = b.generator_matrix(q0).transpose() * cross * b.generator_matrix(q1);
  return {smallest_singular_value(cross), smallest_singular_value(vertical)};
}

ChaplyginReduction build_chaplygin(const ReducedSystem& red, const SamplingOptions& sampling) {
  const DiscreteSystem& sys = red.system();
  const BundleSpec& b = sys.bundle();
  const LieGroup& g = b.group();
  for (const Sample& s : draw_samples(b, sampling)) {
    Mat vertical = b.generator_matrix(s.q0);
    Mat dist = sys.distribution_basis(s.q0);
    Mat both(b.dim(), vertical.cols() + dist.cols());
    both << vertical, dist;
    int rank = numerical_rank(both);
    if (both.cols() != b.dim() || rank != b.dim()) {
      std::ostringstream msg;
      msg << "not a Chaplygin symmetry: V + D has " << both.cols() << " generators of rank " << rank
          << " in dimension " << b.dim();
      throw ValidationError(msg.str(), static_cast<double>(b.dim() - rank));
    }
    BundlePoint q1 = f1_tilde(red.discrete_connection(), s.q0, g.identity(), s.r1);
    double chi = max_abs(sys.constraint_residual(s.q0, q1));
    if (chi > kSectionTolerance) fail("discrete connection is not generated by the kinematic constraints", chi);
  }

  auto shared = std::make_shared<const ReducedSystem>(red);
  SystemDefinition def = base_definition(shared);
  const int nr = b.base_dim();
  def.variational_constraints = [nr](const BundlePoint&) { return Mat(0, nr); };
  def.kinematic_constraints = [](const BundlePoint&, const BundlePoint&) { return Vec(0); };
  return {shared, DiscreteSystem(std::move(def))};
}

AffineDiscreteConnection momentum_level_connection(const DiscreteSystem& sys, const AlgebraCovector& mu) {
  auto solver = std::make_shared<const MomentumLevelSolver>(sys, mu);
  return AffineDiscreteConnection(
      sys.bundle(), [solver](const Vec& r0, const Vec& r1) { return solver->reduced_form(r0, r1); },
      [solver](const Vec& r0, const Vec& r1) { return solver->jacobian(r0, r1); });
}

HorizontalReduction build_horizontal(const DiscreteSystem& sys, const ContinuousConnection& conn,
                                     const AlgebraCovector& mu, const SamplingOptions& sampling) {
  const BundleSpec& b = sys.bundle();
  const LieGroup& g = b.group();
  if (mu.coords.size() != g.dim()) throw DimensionError("momentum level has the wrong size");
  MomentumLevelSolver solver(sys, mu);

  for (const Sample& s : draw_samples(b, sampling)) {
    int s_dim = static_cast<int>(sys.vertical_constrained_algebra_basis(s.q0).cols());
    if (s_dim != g.dim()) fail("symmetry is not horizontal: constrained algebra dimension", s_dim);

    double drift = max_abs(g.coadjoint(s.q0.fiber, mu).coords - mu.coords);
    if (drift > 1e-12 * (1.0 + max_abs(mu.coords))) fail("momentum level is not coadjoint invariant", drift);

    RegularityFigures reg = regularity(sys, s.q0, {s.r1, s.q0.fiber});
    if (reg.full <= kRegularityFloor) fail("lagrangian is not regular: smallest singular value", reg.full);
    if (reg.vertical <= kRegularityFloor) fail("lagrangian is not G-regular: smallest singular value", reg.vertical);

    GroupElement f = solver.solve_fiber(s.q0, s.q0.base);
    double sigma = smallest_singular_value(solver.fiber_sensitivity(s.q0, s.q0.base, f));
    if (sigma <= kRegularityFloor) fail("symmetry is not good for this momentum level", sigma);
  }

  auto red = std::make_shared<const ReducedSystem>(sys, conn, momentum_level_connection(sys, mu));
  SystemDefinition def = base_definition(red);
  def.variational_constraints = [red](const BundlePoint& p) {
    Mat reduced = red->base_distribution(p.base);
    return Mat(fix_column_signs(nullspace(reduced.transpose())).transpose());
  };
  def.kinematic_constraints = [red](const BundlePoint& p0, const BundlePoint& p1) {
    return red->constraint(p0.base, red->group().identity(), p1.base);
  };
  return {mu, red, DiscreteSystem(std::move(def))};
}

}  // namespace nonholorec
