#pragma once

#include <cstdint>
#include <memory>

#include "nonholorec/momentum.hpp"

namespace nonholorec {

// Where the structural preconditions are sampled.
struct SamplingOptions {
  int samples = 8;
  std::uint64_t seed = 20240611;
  double spread = 1.0;  // base and fiber line coordinates drawn from [-spread, spread]
  double step = 0.1;    // |r1 - r0| per coordinate
};

// Bundle over the same base with a zero-dimensional fiber; reduced base systems live here.
BundleSpec base_bundle(const BundleSpec& bundle);

struct ChaplyginReduction {
  std::shared_ptr<const ReducedSystem> reduced;
  DiscreteSystem base_system;  // unconstrained, forced
};

// Requires TQ = V + D (direct) and that the discrete connection's horizontal
// pairs satisfy the kinematic constraints; throws ValidationError otherwise.
ChaplyginReduction build_chaplygin(const ReducedSystem& red, const SamplingOptions& sampling = {});

struct HorizontalReduction {
  AlgebraCovector mu;
  std::shared_ptr<const ReducedSystem> reduced;  // uses the momentum-level connection
  DiscreteSystem base_system;                    // constrained, forced
};

// Connection whose horizontal pairs are those with J_d(q0, q1) = mu. A(r0, r1)
// is found by Newton on J_d((r0, e), (r1, u)) = mu, A = u^-1, and memoized.
AffineDiscreteConnection momentum_level_connection(const DiscreteSystem& sys, const AlgebraCovector& mu);

// Requires V^G inside D, coadjoint invariance of mu, regularity, G-regularity
// and mu-goodness at sampled points; throws ValidationError with the failing figure.
HorizontalReduction build_horizontal(const DiscreteSystem& sys, const ContinuousConnection& conn,
                                     const AlgebraCovector& mu, const SamplingOptions& sampling = {});

// Smallest singular value of the mixed second derivative d^2 L / dq0 dq1, and
// of its restriction to vertical directions.
struct RegularityFigures {
  double full = 0.0;
  double vertical = 0.0;
};
RegularityFigures regularity(const DiscreteSystem& sys, const BundlePoint& q0, const BundlePoint& q1);

}  // namespace nonholorec
