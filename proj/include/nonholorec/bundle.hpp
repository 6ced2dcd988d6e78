#pragma once

#include <memory>

#include "nonholorec/lie_group.hpp"

namespace nonholorec {

// q = (r, h) in R x G.
struct BundlePoint {
  Vec base;
  GroupElement fiber;
};

// Coordinates are stacked as (base part, fiber part).
struct TangentVector {
  BundlePoint at;
  Vec coords;
  Vec base_part() const { return coords.head(at.base.size()); }
  Vec fiber_part() const { return coords.tail(at.fiber.coords.size()); }
};

struct Covector {
  BundlePoint at;
  Vec coords;
  double operator()(const TangentVector& v) const { return coords.dot(v.coords); }
};

// Trivial principal bundle Q = R x G, G acting on the left of the fiber.
class BundleSpec {
 public:
  static constexpr double kFiberTolerance = 1e-9;

  BundleSpec(CoordinateLayout base, std::shared_ptr<const LieGroup> group);

  int base_dim() const { return base_.dim(); }
  int group_dim() const { return group_->dim(); }
  int dim() const { return base_dim() + group_dim(); }
  const CoordinateLayout& base() const { return base_; }
  const LieGroup& group() const { return *group_; }
  const std::shared_ptr<const LieGroup>& group_ptr() const { return group_; }

  BundlePoint point(Vec base, Vec fiber) const;
  BundlePoint from_coords(const Vec& q) const;
  Vec coords(const BundlePoint& q) const;
  // Chart increment from one point to another, unwrapping circle coordinates.
  Vec difference(const BundlePoint& from, const BundlePoint& to) const;
  BundlePoint advance(const BundlePoint& q, const Vec& delta) const;
  // (r, e)
  BundlePoint base_section(const Vec& r) const;

  BundlePoint act(const GroupElement& g, const BundlePoint& q) const;
  Vec project(const BundlePoint& q) const { return q.base; }
  TangentVector infinitesimal_generator(const AlgebraElement& xi, const BundlePoint& q) const;
  // d_Q x d_G matrix whose columns are the generators of the coordinate basis of the algebra.
  Mat generator_matrix(const BundlePoint& q) const;
  // The g with act(g, q_other) = q.
  GroupElement tau(const BundlePoint& q, const BundlePoint& q_other) const;

  void check(const BundlePoint& q) const;

 private:
  CoordinateLayout base_;
  std::shared_ptr<const LieGroup> group_;
};

}  // namespace nonholorec
