#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace nonholorec {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class Side { left, right };

// Angles live in [0, 2pi).
double wrap_angle(double a);
// Representative of `a` (mod 2pi) closest to `reference`.
double unwrap_angle(double a, double reference);
// Signed shortest increment from `from` to `to`, in (-pi, pi].
double angle_difference(double from, double to);

// Coordinates of a product of lines and circles. Circle entries are kept in
// [0, 2pi); differences between points go through the shortest representative.
class CoordinateLayout {
 public:
  CoordinateLayout() = default;
  explicit CoordinateLayout(std::vector<bool> circle_flags);
  static CoordinateLayout lines(int n);

  int dim() const { return static_cast<int>(circle_.size()); }
  bool is_circle(int i) const { return circle_[static_cast<std::size_t>(i)]; }
  bool operator==(const CoordinateLayout&) const = default;

  Vec normalize(Vec x) const;
  Vec difference(const Vec& from, const Vec& to) const;
  Vec advance(const Vec& x, const Vec& delta) const;
  // Lift `x` coordinatewise so that circle entries sit nearest `reference`.
  Vec unwrap_near(const Vec& x, const Vec& reference) const;

 private:
  std::vector<bool> circle_;
};

struct GroupSpec {
  int linear_dims = 0;
  int circle_dims = 0;
  int dim() const { return linear_dims + circle_dims; }
  bool operator==(const GroupSpec&) const = default;
};

struct GroupElement {
  Vec coords;
};

struct AlgebraElement {
  Vec coords;
};

struct AlgebraCovector {
  Vec coords;
  double operator()(const AlgebraElement& xi) const { return coords.dot(xi.coords); }
};

// Tangent and cotangent vectors to G at `at`, in the group's tangent coordinates.
struct GroupTangent {
  GroupElement at;
  Vec coords;
};

struct GroupCotangent {
  GroupElement at;
  Vec coords;
  double operator()(const GroupTangent& v) const { return coords.dot(v.coords); }
};

// Operations on a Lie group that the reduction formulas use. Written against
// the general (nonabelian) contract; AbelianGroup is the shipped realization.
class LieGroup {
 public:
  virtual ~LieGroup() = default;

  virtual int dim() const = 0;
  virtual bool is_abelian() const = 0;
  virtual GroupElement identity() const = 0;
  // Builds a normalized element from raw coordinates.
  virtual GroupElement element(Vec coords) const = 0;
  virtual GroupElement compose(const GroupElement& g, const GroupElement& h) const = 0;
  virtual GroupElement inverse(const GroupElement& g) const = 0;

  // Left: v at w -> g v at g w. Right: v at w -> v g at w g.
  virtual GroupTangent translate_tangent(const GroupTangent& v, const GroupElement& g,
                                         Side side) const = 0;
  // Dual of translate_tangent, so that pairings are preserved.
  virtual GroupCotangent translate_cotangent(const GroupCotangent& alpha, const GroupElement& g,
                                             Side side) const = 0;
  virtual AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& xi) const = 0;
  // Left coadjoint action, mu -> mu o Ad_{g^-1}.
  virtual AlgebraCovector coadjoint(const GroupElement& g, const AlgebraCovector& mu) const = 0;

  // Local chart around an element, used by Newton unknowns and finite differences.
  virtual Vec chart_difference(const GroupElement& from, const GroupElement& to) const = 0;
  virtual GroupElement chart_advance(const GroupElement& g, const Vec& delta) const = 0;

  GroupElement conjugate(const GroupElement& g, const GroupElement& h) const;
  // d(a b) = da b + a db.
  GroupTangent product_tangent(const GroupTangent& da, const GroupTangent& db) const;
  // d(g^-1) = -g^-1 dg g^-1.
  GroupTangent inverse_tangent(const GroupTangent& dg) const;
  bool approx_equal(const GroupElement& g, const GroupElement& h, double tol) const;
};

// R^a x (S^1)^b with the line coordinates first.
class AbelianGroup final : public LieGroup {
 public:
  explicit AbelianGroup(GroupSpec spec);
  static std::shared_ptr<const AbelianGroup> make(GroupSpec spec);
  // Zero-dimensional group, used as the fiber of reduced base systems.
  static std::shared_ptr<const AbelianGroup> trivial();

  const GroupSpec& spec() const { return spec_; }
  const CoordinateLayout& layout() const { return layout_; }

  int dim() const override { return spec_.dim(); }
  bool is_abelian() const override { return true; }
  GroupElement identity() const override;
  GroupElement element(Vec coords) const override;
  GroupElement compose(const GroupElement& g, const GroupElement& h) const override;
  GroupElement inverse(const GroupElement& g) const override;
  GroupTangent translate_tangent(const GroupTangent& v, const GroupElement& g,
                                 Side side) const override;
  GroupCotangent translate_cotangent(const GroupCotangent& alpha, const GroupElement& g,
                                     Side side) const override;
  AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& xi) const override;
  AlgebraCovector coadjoint(const GroupElement& g, const AlgebraCovector& mu) const override;
  Vec chart_difference(const GroupElement& from, const GroupElement& to) const override;
  GroupElement chart_advance(const GroupElement& g, const Vec& delta) const override;

 private:
  struct TrivialTag {};
  explicit AbelianGroup(TrivialTag);
  void check(const Vec& v) const;

  GroupSpec spec_;
  CoordinateLayout layout_;
};

}  // namespace nonholorec
