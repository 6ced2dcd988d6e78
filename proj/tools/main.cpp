#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "io.hpp"
#include "nonholorec/error.hpp"

namespace {

using nonholorec::cli::RunConfig;

constexpr int kSolverFailure = 1;
constexpr int kValidationFailure = 2;

void add_common(CLI::App& cmd, RunConfig& config, std::string& q0, std::string& q1, std::string& format) {
  cmd.add_option("--example", config.example, "particle2d | disk | particle3d")->capture_default_str();
  for (const char* name : {"m", "b", "A", "I", "J", "mu"}) {
    cmd.add_option_function<double>(std::string("--") + name,
                                    [&config, name](double v) { config.params[name] = v; }, "example parameter");
  }
  cmd.add_option("--q0", q0, "initial point, comma separated, base coordinates first");
  cmd.add_option("--q1", q1, "second point, comma separated");
  cmd.add_flag("--complete-q1", config.complete_q1, "recompute the constrained coordinates of q1");
  cmd.add_option("--steps", config.steps, "number of steps N")->check(CLI::NonNegativeNumber)->capture_default_str();
  cmd.add_option("--out", config.out, "output path (stdout when omitted)");
  cmd.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  cmd.add_option("--tol", config.tolerance, "residual tolerance (NONHOLOREC_TOL)");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig config;
  if (const char* env = std::getenv("NONHOLOREC_TOL")) {
    try {
      config.tolerance = std::stod(env);
    } catch (const std::exception&) {
      std::cerr << "error: NONHOLOREC_TOL is not a number\n";
      return kValidationFailure;
    }
  }

  std::string q0;
  std::string q1;
  std::string format = "csv";
  std::string mode;

  CLI::App app{"Discrete nonholonomic mechanics on trivial principal bundles"};
  app.require_subcommand(1);
  auto* simulate = app.add_subcommand("simulate", "solve the discrete Lagrange-d'Alembert equations");
  auto* reduce = app.add_subcommand("reduce", "solve the reduced equations");
  auto* reconstruct = app.add_subcommand("reconstruct", "lift a reduced curve back to the configuration space");
  auto* verify = app.add_subcommand("verify", "run the invariant suite and print a JSON report");
  for (CLI::App* cmd : {simulate, reduce, reconstruct, verify}) add_common(*cmd, config, q0, q1, format);
  for (CLI::App* cmd : {reduce, reconstruct}) {
    cmd->add_option("--mode", mode, "general | chaplygin | horizontal | two-stage");
  }
  reconstruct->add_option("--reduced", config.reduced_path, "reduced curve written by 'reduce'")->required();
  verify->add_option("--perturb", config.perturb, "shift the middle point of the trajectory by this amount");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kValidationFailure;
  }

  try {
    config.format = format == "json" ? nonholorec::cli::OutputFormat::json : nonholorec::cli::OutputFormat::csv;
    if (!mode.empty()) config.mode = mode;
    if (!q0.empty()) config.q0 = nonholorec::cli::parse_coordinates(q0);
    if (!q1.empty()) config.q1 = nonholorec::cli::parse_coordinates(q1);
    if (*simulate) return nonholorec::cli::cmd_simulate(config);
    if (*reduce) return nonholorec::cli::cmd_reduce(config);
    if (*reconstruct) return nonholorec::cli::cmd_reconstruct(config);
    if (*verify) {
      if (verify->count("--example") == 0) config.example = "all";
      return nonholorec::cli::cmd_verify(config);
    }
  } catch (const nonholorec::ConvergenceError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const nonholorec::NumericalError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const nonholorec::Error& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
  return 0;
}
