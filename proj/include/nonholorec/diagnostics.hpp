#pragma once

#include <string>
#include <vector>

#include "nonholorec/examples.hpp"

namespace nonholorec {

struct VerifyCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed() const { return value <= tolerance; }
};

struct VerifyReport {
  std::string example;
  std::vector<VerifyCheck> checks;
  bool passed() const;
  double worst() const;
};

struct VerifyOptions {
  int steps = 100;
  double tolerance = 1e-8;
  // Added to every coordinate of the middle point of the solved trajectory before checking.
  double perturb = 0.0;
  SolverConfig solver;
};

// Solves the example from (q0, q1) and runs every invariant check that applies to it.
// Check names and tolerances are listed in the returned report.
VerifyReport verify_example(const ExampleBundle& example, const BundlePoint& q0, const BundlePoint& q1,
                            const VerifyOptions& options = {});

}  // namespace nonholorec
