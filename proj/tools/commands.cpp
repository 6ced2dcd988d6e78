#include "commands.hpp"

#include <algorithm>
#include <future>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "io.hpp"
#include "nonholorec/diagnostics.hpp"
#include "nonholorec/dla_solver.hpp"
#include "nonholorec/error.hpp"
#include "nonholorec/linalg.hpp"
#include "nonholorec/reconstruction.hpp"

namespace nonholorec::cli {

namespace {

using nlohmann::json;

struct Prepared {
  ExampleBundle example;
  BundlePoint q0;
  std::optional<BundlePoint> q1;
};

BundlePoint to_point(const BundleSpec& b, const Vec& coords, const char* label) {
  if (coords.size() != b.dim()) {
    std::ostringstream msg;
    msg << label << " has " << coords.size() << " coordinates, expected " << b.dim();
    throw ValidationError(msg.str(), 0.0);
  }
  return b.from_coords(coords);
}

// Builds the example, resolves the initial data and checks the kinematic constraints.
// particle3d without --mu takes its momentum level from the initial pair.
Prepared prepare(const RunConfig& config, bool require_q1 = true) {
  std::map<std::string, double> params = config.params;
  if (config.example == "particle3d" && !params.count("mu")) {
    const double m = params.count("m") ? params.at("m") : 1.0;
    params["mu"] = config.q0 && config.q1 && config.q1->size() == 3 && config.q0->size() == 3
                       ? m * ((*config.q1)[2] - (*config.q0)[2])
                       : 0.05 * m;
  }
  ExampleBundle ex = make_example(config.example, params);
  const BundleSpec& b = ex.system.bundle();
  InitialPair fallback = default_initial_pair(ex);

  if (config.q1 && !config.q0) throw ValidationError("--q1 needs --q0", 0.0);
  BundlePoint q0 = config.q0 ? to_point(b, *config.q0, "q0") : fallback.q0;
  std::optional<BundlePoint> q1;
  if (config.q1) {
    q1 = to_point(b, *config.q1, "q1");
  } else if (!config.q0) {
    q1 = fallback.q1;
  }
  if (q1 && config.complete_q1) q1 = ex.complete_q1(q0, *q1);
  if (require_q1 && !q1) throw ValidationError("this command needs --q1 together with --q0", 0.0);
  if (q1) {
    double chi = max_abs(ex.system.constraint_residual(q0, *q1));
    if (chi > kInitialConstraintTolerance) {
      std::ostringstream msg;
      msg << "initial pair violates the kinematic constraints (residual " << format_number(chi) << ")";
      throw ValidationError(msg.str(), chi);
    }
  }
  return {std::move(ex), q0, q1};
}

json params_json(const ExampleBundle& ex) {
  json out = json::object();
  for (const auto& [key, value] : ex.params) out[key] = value;
  return out;
}

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

double max_constraint(const DiscreteSystem& sys, const DiscreteCurve& curve) {
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < curve.size(); ++k) {
    worst = std::max(worst, max_abs(sys.constraint_residual(curve[k], curve[k + 1])));
  }
  return worst;
}

// Trajectory output shared by simulate and reconstruct; `multipliers` may be empty.
void write_trajectory(const RunConfig& config, const ExampleBundle& ex, const DiscreteCurve& curve,
                      const std::vector<Vec>& multipliers) {
  const DiscreteSystem& sys = ex.system;
  const BundleSpec& b = sys.bundle();
  const int n_lambda = multipliers.empty() ? 0 : static_cast<int>(multipliers.front().size());
  if (config.format == OutputFormat::json) {
    json traj = json::array();
    for (const BundlePoint& q : curve) traj.push_back(to_std(b.coords(q)));
    json lambdas = json::array();
    for (const Vec& l : multipliers) lambdas.push_back(to_std(l));
    json doc{{"example", ex.id},
             {"params", params_json(ex)},
             {"coordinates", ex.coordinate_names},
             {"trajectory", traj},
             {"multipliers", lambdas},
             {"residuals", {{"dla", max_dla_residual(sys, curve)}, {"constraint", max_constraint(sys, curve)}}}};
    write_text(config.out, doc.dump(2) + "\n");
    return;
  }
  Table table;
  table.header.push_back("k");
  for (const std::string& name : ex.coordinate_names) table.header.push_back(name);
  for (int a = 0; a < n_lambda; ++a) table.header.push_back("lambda" + std::to_string(a + 1));
  for (std::size_t k = 0; k < curve.size(); ++k) {
    auto& row = table.rows.emplace_back();
    row.push_back(static_cast<double>(k));
    Vec c = b.coords(curve[k]);
    for (int i = 0; i < c.size(); ++i) row.push_back(c[i]);
    const bool interior = k >= 1 && k <= multipliers.size();
    for (int a = 0; a < n_lambda; ++a) {
      row.push_back(interior ? std::optional<double>(multipliers[k - 1][a]) : std::nullopt);
    }
  }
  std::ostringstream out;
  write_csv(out, table);
  write_text(config.out, out.str());
}

ReductionMode resolve_mode(const RunConfig& config, const ExampleBundle& ex) {
  return config.mode ? parse_reduction_mode(*config.mode) : ex.mode;
}

void require_level(const ExampleBundle& ex, const BundlePoint& q0, const BundlePoint& q1) {
  if (!ex.momentum_level) throw ValidationError("example '" + ex.id + "' has no momentum level", 0.0);
  const Vec& mu = ex.momentum_level->coords;
  double gap = max_abs(momentum_map(ex.system, q0, q1).value.coords - mu);
  if (gap > 1e-10 * (1.0 + max_abs(mu))) {
    throw ValidationError("initial pair is not on the momentum level (residual " + format_number(gap) + ")", gap);
  }
}

struct ReducedOutput {
  std::vector<std::string> r_names;
  std::vector<std::string> theta_names;
  std::vector<Vec> r;
  std::vector<Vec> theta;  // one shorter than r
  double residual = 0.0;
};

ReducedOutput base_only(const std::vector<std::string>& r_names, std::vector<std::string> theta_names,
                        const DiscreteCurve& base_curve, int theta_dim) {
  ReducedOutput out{r_names, std::move(theta_names), {}, {}, 0.0};
  for (const BundlePoint& p : base_curve) out.r.push_back(p.base);
  out.theta.assign(out.r.size() - 1, Vec::Zero(theta_dim));
  return out;
}

std::vector<std::string> prefixed(const std::string& prefix, const std::vector<std::string>& names,
                                  std::size_t from, std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t i = from; i < from + count; ++i) out.push_back(prefix + names[i]);
  return out;
}

}  // namespace

int cmd_simulate(const RunConfig& config) {
  Prepared p = prepare(config);
  Trajectory traj = dla_trajectory(p.example.system, p.q0, *p.q1, config.steps);
  write_trajectory(config, p.example, traj.curve, traj.multipliers);
  return 0;
}

int cmd_reduce(const RunConfig& config) {
  Prepared p = prepare(config);
  const ExampleBundle& ex = p.example;
  const BundleSpec& b = ex.system.bundle();
  const auto& names = ex.coordinate_names;
  const auto nr = static_cast<std::size_t>(b.base_dim());
  const auto ng = static_cast<std::size_t>(b.group_dim());
  const ReductionMode mode = resolve_mode(config, ex);
  const BundlePoint& q0 = p.q0;
  const BundlePoint& q1 = *p.q1;

  ReducedOutput out;
  switch (mode) {
    case ReductionMode::general: {
      ReducedSystem red(ex.system, ex.connection, ex.discrete_connection);
      const LieGroup& g = red.group();
      GroupElement theta0 = g.conjugate(g.inverse(q0.fiber), ex.discrete_connection.form(q0, q1));
      ReducedTrajectory rt = reduced_trajectory(red, q0.base, theta0, q1.base, config.steps);
      out = {prefixed("r_", names, 0, nr), prefixed("theta_", names, nr, ng), {}, {}, 0.0};
      for (const ReducedState& s : rt.curve.states) {
        out.r.push_back(s.r);
        out.theta.push_back(s.theta.coords);
      }
      out.r.push_back(rt.curve.terminal_r);
      out.residual = max_reduced_residual(red, rt.curve);
      break;
    }
    case ReductionMode::chaplygin: {
      ReducedSystem red(ex.system, ex.connection, ex.discrete_connection);
      ChaplyginReduction chap = build_chaplygin(red);
      const BundleSpec& base = chap.base_system.bundle();
      Trajectory traj = dla_trajectory(chap.base_system, base.point(q0.base, Vec(0)), base.point(q1.base, Vec(0)),
                                       config.steps);
      out = base_only(prefixed("r_", names, 0, nr), prefixed("theta_", names, nr, ng), traj.curve,
                      static_cast<int>(ng));
      out.residual = max_dla_residual(chap.base_system, traj.curve);
      break;
    }
    case ReductionMode::horizontal: {
      require_level(ex, q0, q1);
      HorizontalReduction hor = build_horizontal(ex.system, ex.connection, *ex.momentum_level);
      const BundleSpec& base = hor.base_system.bundle();
      Trajectory traj = dla_trajectory(hor.base_system, base.point(q0.base, Vec(0)), base.point(q1.base, Vec(0)),
                                       config.steps);
      out = base_only(prefixed("r_", names, 0, nr), prefixed("theta_", names, nr, ng), traj.curve,
                      static_cast<int>(ng));
      out.residual = max_dla_residual(hor.base_system, traj.curve);
      break;
    }
    case ReductionMode::two_stage: {
      require_level(ex, q0, q1);
      TwoStageReduction stages = build_two_stage(ex);
      TwoStageSolution sol = solve_two_stage(stages, q0, q1, config.steps);
      out = {prefixed("r_", names, 0, 1), prefixed("theta_", names, 1, 2), sol.base_curve, {}, 0.0};
      out.theta.assign(out.r.size() - 1, Vec::Zero(2));
      DiscreteCurve base_curve;
      const BundleSpec& base = stages.chaplygin.base_system.bundle();
      for (const Vec& r : sol.base_curve) base_curve.push_back(base.point(r, Vec(0)));
      out.residual = max_dla_residual(stages.chaplygin.base_system, base_curve);
      break;
    }
  }

  if (config.format == OutputFormat::json) {
    json rows = json::array();
    for (std::size_t k = 0; k < out.r.size(); ++k) {
      std::vector<double> row = to_std(out.r[k]);
      if (k < out.theta.size()) {
        for (double v : to_std(out.theta[k])) row.push_back(v);
      }
      rows.push_back(row);
    }
    json doc{{"example", ex.id},        {"params", params_json(ex)},          {"mode", to_string(mode)},
             {"r", out.r_names},         {"theta", out.theta_names},          {"trajectory", rows},
             {"residuals", {{"reduced", out.residual}}}};
    write_text(config.out, doc.dump(2) + "\n");
    return 0;
  }
  Table table;
  table.header.push_back("k");
  table.header.insert(table.header.end(), out.r_names.begin(), out.r_names.end());
  table.header.insert(table.header.end(), out.theta_names.begin(), out.theta_names.end());
  for (std::size_t k = 0; k < out.r.size(); ++k) {
    auto& row = table.rows.emplace_back();
    row.push_back(static_cast<double>(k));
    for (double v : to_std(out.r[k])) row.push_back(v);
    for (std::size_t i = 0; i < out.theta_names.size(); ++i) {
      row.push_back(k < out.theta.size() ? std::optional<double>(out.theta[k][static_cast<Eigen::Index>(i)])
                                         : std::nullopt);
    }
  }
  std::ostringstream text;
  write_csv(text, table);
  write_text(config.out, text.str());
  return 0;
}

int cmd_reconstruct(const RunConfig& config) {
  if (config.reduced_path.empty()) throw ValidationError("reconstruct needs --reduced <file>", 0.0);
  const std::string content = read_text(config.reduced_path);

  std::vector<Vec> r;
  std::vector<Vec> theta;
  std::size_t nr = 0;
  std::size_t ntheta = 0;
  std::optional<std::string> file_mode;
  if (!content.empty() && content.front() == '{') {
    json doc = json::parse(content);
    nr = doc.at("r").size();
    ntheta = doc.at("theta").size();
    if (doc.contains("mode")) file_mode = doc.at("mode").get<std::string>();
    const auto& rows = doc.at("trajectory");
    for (std::size_t k = 0; k < rows.size(); ++k) {
      std::vector<double> row = rows[k].get<std::vector<double>>();
      if (row.size() < nr) throw ValidationError("reduced row is too short", 0.0);
      r.push_back(Eigen::Map<const Vec>(row.data(), static_cast<Eigen::Index>(nr)));
      if (row.size() == nr + ntheta) {
        theta.push_back(Eigen::Map<const Vec>(row.data() + nr, static_cast<Eigen::Index>(ntheta)));
      }
    }
  } else {
    std::istringstream in(content);
    Table table = read_csv(in);
    for (const std::string& h : table.header) {
      if (h.rfind("r_", 0) == 0) ++nr;
      if (h.rfind("theta_", 0) == 0) ++ntheta;
    }
    if (table.header.size() != 1 + nr + ntheta) throw ValidationError("unexpected reduced CSV header", 0.0);
    for (const auto& row : table.rows) {
      Vec rk(static_cast<Eigen::Index>(nr));
      for (std::size_t i = 0; i < nr; ++i) {
        if (!row[1 + i]) throw ValidationError("missing r value in reduced CSV", 0.0);
        rk[static_cast<Eigen::Index>(i)] = *row[1 + i];
      }
      r.push_back(rk);
      if (ntheta > 0 && row[1 + nr]) {
        Vec tk(static_cast<Eigen::Index>(ntheta));
        for (std::size_t i = 0; i < ntheta; ++i) tk[static_cast<Eigen::Index>(i)] = row[1 + nr + i].value_or(0.0);
        theta.push_back(tk);
      }
    }
  }
  if (r.size() < 2) throw ValidationError("reduced curve needs at least two points", 0.0);

  Prepared p = prepare(config, false);
  const ExampleBundle& ex = p.example;
  ReductionMode mode = config.mode ? parse_reduction_mode(*config.mode)
                                   : (file_mode ? parse_reduction_mode(*file_mode) : ex.mode);
  DiscreteCurve curve;
  switch (mode) {
    case ReductionMode::general: {
      if (theta.size() + 1 != r.size()) throw ValidationError("reduced curve needs theta on every row but the last", 0.0);
      ReducedCurve reduced;
      for (std::size_t k = 0; k < theta.size(); ++k) {
        reduced.states.push_back({r[k], ex.system.bundle().group().element(theta[k])});
      }
      reduced.terminal_r = r.back();
      curve = reconstruct(ex.system, ex.discrete_connection, reduced, p.q0, p.q1);
      break;
    }
    case ReductionMode::chaplygin: {
      build_chaplygin(ReducedSystem(ex.system, ex.connection, ex.discrete_connection));
      curve = reconstruct_horizontal_lift_only(ex.discrete_connection, r, p.q0, p.q1);
      break;
    }
    case ReductionMode::horizontal: {
      if (p.q1) require_level(ex, p.q0, *p.q1);
      curve = reconstruct_horizontal_lift_only(ex.discrete_connection, r, p.q0, p.q1);
      break;
    }
    case ReductionMode::two_stage: {
      if (p.q1) require_level(ex, p.q0, *p.q1);
      TwoStageReduction stages = build_two_stage(ex);
      const BundleSpec& middle = stages.middle_bundle;
      BundlePoint m0 = middle.point(p.q0.base.head(1), p.q0.base.tail(1));
      std::optional<BundlePoint> m1;
      if (p.q1) m1 = middle.point(p.q1->base.head(1), p.q1->base.tail(1));
      DiscreteCurve middle_curve = reconstruct_horizontal_lift_only(stages.second->discrete_connection(), r, m0, m1);
      std::vector<Vec> middle_coords;
      for (const BundlePoint& q : middle_curve) middle_coords.push_back(middle.coords(q));
      curve = reconstruct_horizontal_lift_only(stages.first.reduced->discrete_connection(), middle_coords, p.q0, p.q1);
      break;
    }
  }
  write_trajectory(config, ex, curve, {});
  return 0;
}

int cmd_verify(const RunConfig& config) {
  std::vector<RunConfig> runs;
  if (config.example == "all") {
    for (const std::string& id : example_ids()) {
      RunConfig c = config;
      c.example = id;
      c.params.clear();
      c.q0.reset();
      c.q1.reset();
      runs.push_back(c);
    }
  } else {
    runs.push_back(config);
  }

  std::vector<std::future<VerifyReport>> jobs;
  for (const RunConfig& c : runs) {
    jobs.push_back(std::async(std::launch::async, [c] {
      Prepared p = prepare(c);
      VerifyOptions options;
      options.steps = c.steps;
      options.tolerance = c.tolerance;
      options.perturb = c.perturb;
      return verify_example(p.example, p.q0, *p.q1, options);
    }));
  }

  bool passed = true;
  json reports = json::array();
  std::ostringstream summary;
  for (auto& job : jobs) {
    VerifyReport report = job.get();
    passed = passed && report.passed();
    json residuals = json::object();
    for (const VerifyCheck& c : report.checks) {
      residuals[c.name] = c.value;
      summary << report.example << ' ' << c.name << ' ' << format_number(c.value) << (c.passed() ? " ok" : " FAIL")
              << '\n';
    }
    reports.push_back({{"example", report.example},
                       {"passed", report.passed()},
                       {"tolerance", config.tolerance},
                       {"residuals", residuals}});
  }
  json doc{{"passed", passed}, {"reports", reports}};
  write_text(config.out, doc.dump(2) + "\n");
  std::cerr << summary.str();
  return passed ? 0 : 2;
}

}  // namespace nonholorec::cli
