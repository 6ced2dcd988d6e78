#include "nonholorec/lie_group.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nonholorec/error.hpp"
#include "nonholorec/linalg.hpp"

namespace nonholorec {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double wrap_angle(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  // fmod of a tiny negative number can round up to exactly 2pi.
  if (w >= kTwoPi) w -= kTwoPi;
  return w;
}

double angle_difference(double from, double to) {
  double d = std::remainder(to - from, kTwoPi);
  if (d <= -std::numbers::pi) d += kTwoPi;
  return d;
}

double unwrap_angle(double a, double reference) { return reference + angle_difference(reference, a); }

CoordinateLayout::CoordinateLayout(std::vector<bool> circle_flags) : circle_(std::move(circle_flags)) {}

CoordinateLayout CoordinateLayout::lines(int n) {
  return CoordinateLayout(std::vector<bool>(static_cast<std::size_t>(n), false));
}

Vec CoordinateLayout::normalize(Vec x) const {
  if (x.size() != dim()) {
    throw DimensionError("coordinate vector has size " + std::to_string(x.size()) + ", expected " +
                         std::to_string(dim()));
  }
  for (int i = 0; i < dim(); ++i) {
    if (is_circle(i)) x[i] = wrap_angle(x[i]);
  }
  return x;
}

Vec CoordinateLayout::difference(const Vec& from, const Vec& to) const {
  if (from.size() != dim() || to.size() != dim()) throw DimensionError("coordinate size mismatch");
  Vec d = to - from;
  for (int i = 0; i < dim(); ++i) {
    if (is_circle(i)) d[i] = angle_difference(from[i], to[i]);
  }
  return d;
}

Vec CoordinateLayout::advance(const Vec& x, const Vec& delta) const {
  if (delta.size() != dim()) throw DimensionError("increment size mismatch");
  return normalize(x + delta);
}

Vec CoordinateLayout::unwrap_near(const Vec& x, const Vec& reference) const {
  if (x.size() != dim() || reference.size() != dim()) throw DimensionError("coordinate size mismatch");
  Vec out = x;
  for (int i = 0; i < dim(); ++i) {
    if (is_circle(i)) out[i] = unwrap_angle(x[i], reference[i]);
  }
  return out;
}

GroupElement LieGroup::conjugate(const GroupElement& g, const GroupElement& h) const {
  return compose(compose(g, h), inverse(g));
}

GroupTangent LieGroup::product_tangent(const GroupTangent& da, const GroupTangent& db) const {
  GroupTangent left = translate_tangent(da, db.at, Side::right);
  GroupTangent right = translate_tangent(db, da.at, Side::left);
  return {left.at, left.coords + right.coords};
}

GroupTangent LieGroup::inverse_tangent(const GroupTangent& dg) const {
  GroupElement g_inv = inverse(dg.at);
  GroupTangent v = translate_tangent(translate_tangent(dg, g_inv, Side::left), g_inv, Side::right);
  v.coords = -v.coords;
  return v;
}

bool LieGroup::approx_equal(const GroupElement& g, const GroupElement& h, double tol) const {
  return max_abs(chart_difference(g, h)) <= tol;
}

AbelianGroup::AbelianGroup(GroupSpec spec) : spec_(spec) {
  if (spec.linear_dims < 0 || spec.circle_dims < 0 || spec.dim() < 1) {
    throw DimensionError("an abelian symmetry group needs at least one factor");
  }
  std::vector<bool> flags(static_cast<std::size_t>(spec.linear_dims), false);
  flags.insert(flags.end(), static_cast<std::size_t>(spec.circle_dims), true);
  layout_ = CoordinateLayout(std::move(flags));
}

AbelianGroup::AbelianGroup(TrivialTag) : spec_{0, 0}, layout_(CoordinateLayout::lines(0)) {}

std::shared_ptr<const AbelianGroup> AbelianGroup::make(GroupSpec spec) {
  return std::make_shared<const AbelianGroup>(spec);
}

std::shared_ptr<const AbelianGroup> AbelianGroup::trivial() {
  static const std::shared_ptr<const AbelianGroup> group(new AbelianGroup(TrivialTag{}));
  return group;
}

void AbelianGroup::check(const Vec& v) const {
  if (v.size() != dim()) {
    throw DimensionError("group coordinates have size " + std::to_string(v.size()) + ", expected " +
                         std::to_string(dim()));
  }
}

GroupElement AbelianGroup::identity() const { return {Vec::Zero(dim())}; }

GroupElement AbelianGroup::element(Vec coords) const {
  check(coords);
  return {layout_.normalize(std::move(coords))};
}

GroupElement AbelianGroup::compose(const GroupElement& g, const GroupElement& h) const {
  check(g.coords);
  check(h.coords);
  return {layout_.normalize(g.coords + h.coords)};
}

GroupElement AbelianGroup::inverse(const GroupElement& g) const {
  check(g.coords);
  return {layout_.normalize(-g.coords)};
}

GroupTangent AbelianGroup::translate_tangent(const GroupTangent& v, const GroupElement& g, Side side) const {
  check(v.coords);
  GroupElement at = side == Side::left ? compose(g, v.at) : compose(v.at, g);
  return {std::move(at), v.coords};
}

GroupCotangent AbelianGroup::translate_cotangent(const GroupCotangent& alpha, const GroupElement& g,
                                                 Side side) const {
  check(alpha.coords);
  GroupElement at = side == Side::left ? compose(g, alpha.at) : compose(alpha.at, g);
  return {std::move(at), alpha.coords};
}

AlgebraElement AbelianGroup::adjoint(const GroupElement& g, const AlgebraElement& xi) const {
  check(g.coords);
  check(xi.coords);
  return xi;
}

AlgebraCovector AbelianGroup::coadjoint(const GroupElement& g, const AlgebraCovector& mu) const {
  check(g.coords);
  check(mu.coords);
  return mu;
}

Vec AbelianGroup::chart_difference(const GroupElement& from, const GroupElement& to) const {
  return layout_.difference(from.coords, to.coords);
}

GroupElement AbelianGroup::chart_advance(const GroupElement& g, const Vec& delta) const {
  return {layout_.advance(g.coords, delta)};
}

}  // namespace nonholorec
