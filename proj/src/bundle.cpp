#include "nonholorec/bundle.hpp"

#include <string>

#include "nonholorec/error.hpp"
#include "nonholorec/linalg.hpp"

namespace nonholorec {

BundleSpec::BundleSpec(CoordinateLayout base, std::shared_ptr<const LieGroup> group)
    : base_(std::move(base)), group_(std::move(group)) {
  if (!group_) throw DimensionError("bundle needs a structure group");
}

void BundleSpec::check(const BundlePoint& q) const {
  if (q.base.size() != base_dim() || q.fiber.coords.size() != group_dim()) {
    throw DimensionError("bundle point has shape (" + std::to_string(q.base.size()) + ", " +
                         std::to_string(q.fiber.coords.size()) + "), expected (" +
                         std::to_string(base_dim()) + ", " + std::to_string(group_dim()) + ")");
  }
}

BundlePoint BundleSpec::point(Vec base, Vec fiber) const {
  return {base_.normalize(std::move(base)), group_->element(std::move(fiber))};
}

BundlePoint BundleSpec::from_coords(const Vec& q) const {
  if (q.size() != dim()) throw DimensionError("configuration vector size mismatch");
  return point(q.head(base_dim()), q.tail(group_dim()));
}

Vec BundleSpec::coords(const BundlePoint& q) const {
  check(q);
  Vec out(dim());
  out << q.base, q.fiber.coords;
  return out;
}

Vec BundleSpec::difference(const BundlePoint& from, const BundlePoint& to) const {
  check(from);
  check(to);
  Vec out(dim());
  out << base_.difference(from.base, to.base), group_->chart_difference(from.fiber, to.fiber);
  return out;
}

BundlePoint BundleSpec::advance(const BundlePoint& q, const Vec& delta) const {
  check(q);
  if (delta.size() != dim()) throw DimensionError("increment size mismatch");
  return {base_.advance(q.base, delta.head(base_dim())),
          group_->chart_advance(q.fiber, delta.tail(group_dim()))};
}

BundlePoint BundleSpec::base_section(const Vec& r) const { return {base_.normalize(r), group_->identity()}; }

BundlePoint BundleSpec::act(const GroupElement& g, const BundlePoint& q) const {
  check(q);
  return {q.base, group_->compose(g, q.fiber)};
}

TangentVector BundleSpec::infinitesimal_generator(const AlgebraElement& xi, const BundlePoint& q) const {
  check(q);
  GroupTangent at_fiber =
      group_->translate_tangent({group_->identity(), xi.coords}, q.fiber, Side::right);
  Vec coords = Vec::Zero(dim());
  coords.tail(group_dim()) = at_fiber.coords;
  return {q, std::move(coords)};
}

Mat BundleSpec::generator_matrix(const BundlePoint& q) const {
  Mat out(dim(), group_dim());
  for (int i = 0; i < group_dim(); ++i) {
    out.col(i) = infinitesimal_generator({Vec::Unit(group_dim(), i)}, q).coords;
  }
  return out;
}

GroupElement BundleSpec::tau(const BundlePoint& q, const BundlePoint& q_other) const {
  check(q);
  check(q_other);
  double gap = max_abs(base_.difference(q_other.base, q.base));
  if (gap > kFiberTolerance) {
    throw FiberMismatchError("points lie in different fibers (base gap " + std::to_string(gap) + ")");
  }
  return group_->compose(q.fiber, group_->inverse(q_other.fiber));
}

}  // namespace nonholorec
