#pragma once

#include <gtest/gtest.h>

#include <random>

#include "nonholorec/linalg.hpp"
#include "nonholorec/system.hpp"

namespace nonholorec::testing {

inline ::testing::AssertionResult near(const Vec& actual, const Vec& expected, double tol) {
  if (actual.size() != expected.size()) {
    return ::testing::AssertionFailure() << "size " << actual.size() << " vs " << expected.size();
  }
  double gap = max_abs(actual - expected);
  if (gap <= tol) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << "gap " << gap << " > " << tol << "\n actual:   " << actual.transpose()
                                       << "\n expected: " << expected.transpose();
}

inline ::testing::AssertionResult near(const BundleSpec& b, const BundlePoint& actual, const BundlePoint& expected,
                                       double tol) {
  return near(b.difference(expected, actual), Vec::Zero(b.dim()), tol);
}

// Deterministic uniform samples in [lo, hi].
class Sampler {
 public:
  explicit Sampler(unsigned seed = 7) : rng_(seed) {}
  double operator()(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  Vec vec(int n, double lo = -1.0, double hi = 1.0) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = (*this)(lo, hi);
    return v;
  }

 private:
  std::mt19937 rng_;
};

}  // namespace nonholorec::testing
