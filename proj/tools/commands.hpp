#pragma once

#include <map>
#include <optional>
#include <string>

#include "nonholorec/examples.hpp"

namespace nonholorec::cli {

enum class OutputFormat { csv, json };

struct RunConfig {
  std::string example = "particle2d";
  std::map<std::string, double> params;  // only the flags the user set
  std::optional<Vec> q0;
  std::optional<Vec> q1;
  bool complete_q1 = false;  // recompute the dependent coordinates of q1 from the constraints
  int steps = 100;
  double tolerance = 1e-8;
  std::string out;  // empty writes to stdout
  OutputFormat format = OutputFormat::csv;
  std::optional<std::string> mode;
  std::string reduced_path;
  double perturb = 0.0;
};

// Each command writes its output and returns the process exit code.
int cmd_simulate(const RunConfig& config);
int cmd_reduce(const RunConfig& config);
int cmd_reconstruct(const RunConfig& config);
int cmd_verify(const RunConfig& config);

}  // namespace nonholorec::cli
