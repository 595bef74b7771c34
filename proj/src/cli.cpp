#include "turnpike/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "turnpike/config.hpp"
#include "turnpike/errors.hpp"
#include "turnpike/io.hpp"
#include "turnpike/optimize.hpp"
#include "turnpike/parabolic.hpp"
#include "turnpike/steady.hpp"
#include "turnpike/turnpike.hpp"

namespace turnpike::cli {

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitOptimizer = 4;

/// Optimizer gave up: distinct from a solver failure for exit-code purposes.
struct OptimizerFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write \"" + path.string() + "\"");
  os << text;
  if (!os) throw ConfigError("failed while writing \"" + path.string() + "\"");
}

void write_json(const std::filesystem::path& path, const ordered_json& j) {
  write_text(path, j.dump(2) + "\n");
}

/// Stride that keeps space-time CSVs near a thousand time stamps.
int stride_for(int nt) { return std::max(1, (nt + 999) / 1000); }

ordered_json optimize_to_json(const OptimizationResult& r) {
  ordered_json j;
  j["cost"] = cost_to_json(r.cost);
  j["grad_norm"] = r.final_grad_norm;
  j["iterations"] = r.iterations;
  j["restarts"] = r.restarts;
  j["stepsize_used"] = r.stepsize_used;
  j["reason"] = to_string(r.reason);
  return j;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int cmd_solve(const RunConfig& cfg, const std::filesystem::path& out) {
  DiscreteProblem dp = DiscreteProblem::make(cfg.problem, cfg.disc);
  Control zero = Control::zeros(cfg.disc.nt, cfg.disc.nx, dp.dt);
  Trajectory y = solve_forward(cfg.problem, cfg.disc, zero);

  int stride = stride_for(cfg.disc.nt);
  std::ostringstream csv;
  write_trajectory_csv(csv, dp.grid, y, stride);
  write_text(out / "trajectory.csv", csv.str());

  ordered_json rep;
  rep["command"] = "solve";
  rep["config"] = cfg.to_json();
  rep["time_stride"] = stride;
  rep["final_linf"] = norm(dp.grid, y.states.back(), NormKind::Linf);
  rep["final_l2"] = norm(dp.grid, y.states.back(), NormKind::L2);
  write_json(out / "solve_report.json", rep);

  std::cout << "solve: " << cfg.disc.nt << " steps, ‖y(T)‖_inf = "
            << fmt17(rep["final_linf"].get<double>()) << "\n"
            << "wrote " << (out / "trajectory.csv").string() << "\n";
  return kExitOk;
}

int cmd_steady(const RunConfig& cfg, const std::filesystem::path& out) {
  Grid g = Grid::make(cfg.problem.domain.lo, cfg.problem.domain.hi, cfg.disc.nx);
  SteadyPair pair = solve_steady_optimum(cfg.problem, g, cfg.steady);
  double residual = steady_optimality_residual(cfg.problem, g, pair);

  std::ostringstream csv;
  write_steady_csv(csv, g, pair);
  write_text(out / "steady_profiles.csv", csv.str());

  ordered_json rep;
  rep["command"] = "steady";
  rep["config"] = cfg.to_json();
  rep["steady"] = steady_to_json(pair);
  rep["optimality_residual"] = residual;
  write_json(out / "steady_report.json", rep);

  std::cout << "steady: J_s = " << fmt17(pair.cost.total)
            << ", optimality residual = " << fmt17(residual) << " ("
            << pair.iterations << " iterations)\n"
            << "wrote " << (out / "steady_profiles.csv").string() << "\n";
  if (!pair.converged)
    throw OptimizerFailure("steady optimizer: gradient norm " +
                           fmt17(pair.grad_norm) + " after " +
                           std::to_string(pair.iterations) +
                           " iterations (tol " + fmt17(cfg.steady.grad_tol) + ")");
  return kExitOk;
}

int cmd_optimize(const RunConfig& cfg, const std::filesystem::path& out) {
  DiscreteProblem dp = DiscreteProblem::make(cfg.problem, cfg.disc);
  Control u0 = Control::zeros(cfg.disc.nt, cfg.disc.nx, dp.dt);
  OptimizationResult res = gradient_descent(cfg.problem, cfg.disc, u0, cfg.optimizer);

  Grid g = dp.grid;
  SteadyPair pair = solve_steady_optimum(cfg.problem, g, cfg.steady);
  Field& mid = res.state.states[res.state.nt() / 2];
  double mid_dist = 0.0;
  for (int j = 0; j < g.nx; ++j)
    mid_dist = std::max(mid_dist, std::fabs(mid[j] - pair.state[j]));

  int stride = stride_for(cfg.disc.nt);
  {
    std::ostringstream csv;
    write_cost_history_csv(csv, res);
    write_text(out / "cost_history.csv", csv.str());
  }
  {
    std::ostringstream csv;
    write_control_csv(csv, g, res.control, stride);
    write_text(out / "control.csv", csv.str());
  }
  {
    std::ostringstream csv;
    write_trajectory_csv(csv, g, res.state, stride);
    write_text(out / "state.csv", csv.str());
  }

  ordered_json rep;
  rep["command"] = "optimize";
  rep["config"] = cfg.to_json();
  rep["optimize"] = optimize_to_json(res);
  rep["steady"] = steady_to_json(pair);
  rep["midpoint_linf_distance_to_steady"] = mid_dist;
  rep["time_stride"] = stride;
  write_json(out / "optimize_report.json", rep);

  std::cout << "optimize: J_T = " << fmt17(res.cost.total) << " after "
            << res.iterations << " iterations (" << to_string(res.reason)
            << "), ‖grad‖ = " << fmt17(res.final_grad_norm) << "\n"
            << "midpoint distance to steady optimum: " << fmt17(mid_dist) << "\n"
            << "wrote " << (out / "cost_history.csv").string() << "\n";
  if (res.reason == OptimizationResult::Reason::Diverged)
    throw OptimizerFailure("gradient descent diverged after " +
                           std::to_string(res.restarts) + " restarts");
  return kExitOk;
}

int cmd_turnpike(const RunConfig& cfg, const std::filesystem::path& out) {
  Grid g = Grid::make(cfg.problem.domain.lo, cfg.problem.domain.hi, cfg.disc.nx);
  SteadyPair pair = solve_steady_optimum(cfg.problem, g, cfg.steady);

  DiscreteProblem dp = DiscreteProblem::make(cfg.problem, cfg.disc);
  Control u0 = Control::zeros(cfg.disc.nt, cfg.disc.nx, dp.dt);
  OptimizationResult res = gradient_descent(cfg.problem, cfg.disc, u0, cfg.optimizer);
  if (res.reason == OptimizationResult::Reason::Diverged)
    throw OptimizerFailure("gradient descent diverged after " +
                           std::to_string(res.restarts) + " restarts");

  TurnpikeOptions topts;
  topts.delta = cfg.turnpike.delta;
  TurnpikeReport report = make_turnpike_report(cfg.problem, cfg.disc, res, pair, topts);

  // A switch time past the horizon means "feedback the whole way": clamp
  // rather than reject, so the config default works at every horizon.
  double tau = std::min(cfg.turnpike.tau, cfg.problem.horizon);
  QuasiOptimalResult quasi = quasi_optimal_strategy(cfg.problem, cfg.disc, pair,
                                                    tau, cfg.turnpike.kappa,
                                                    res.cost.total);

  std::ostringstream csv;
  write_distance_csv(csv, report.curves);
  write_text(out / "distance.csv", csv.str());

  ordered_json rep;
  rep["command"] = "turnpike";
  rep["config"] = cfg.to_json();
  rep["steady"] = steady_to_json(pair);
  rep["optimize"] = optimize_to_json(res);
  ordered_json& tj = rep["turnpike"];
  tj["delta"] = report.delta;
  tj["t_entry"] = report.t_entry;
  tj["entry_fit"] = expfit_to_json(report.entry_fit);
  tj["exit_fit"] = expfit_to_json(report.exit_fit);
  tj["plateau_dy"] = report.plateau_dy;
  tj["plateau_total"] = report.plateau_total;
  tj["cost_gap"] = report.cost_gap;
  tj["confirmed"] = report.confirmed;
  tj["note"] = report.note;
  rep["quasi_optimal"] = {
      {"tau", tau},
      {"kappa", cfg.turnpike.kappa},
      {"cost", cost_to_json(quasi.cost)},
      {"excess_over_optimal", quasi.excess},
  };
  write_json(out / "turnpike_report.json", rep);

  std::cout << "turnpike: " << (report.confirmed ? "confirmed" : "NOT confirmed")
            << " — " << report.note << "\n"
            << "  t_entry = " << fmt17(report.t_entry)
            << ", mu_entry = " << fmt17(report.entry_fit.mu)
            << " (residual " << fmt17(report.entry_fit.residual) << ")\n"
            << "  plateau d_y = " << fmt17(report.plateau_dy)
            << ", cost gap J_T - T·J_s = " << fmt17(report.cost_gap) << "\n"
            << "  quasi-optimal excess = " << fmt17(quasi.excess) << "\n"
            << "wrote " << (out / "distance.csv").string() << "\n";
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, const std::filesystem::path& out, int jobs) {
  SweepTable table = averages_sweep(cfg.problem, cfg.sweep.dt, cfg.sweep.nx,
                                    cfg.sweep.horizons, cfg.optimizer, cfg.steady, jobs);

  std::ostringstream csv;
  write_sweep_csv(csv, table);
  write_text(out / "sweep.csv", csv.str());

  ordered_json rep;
  rep["command"] = "sweep";
  rep["config"] = cfg.to_json();
  rep["sweep"] = sweep_to_json(table);
  write_json(out / "sweep_report.json", rep);

  int ok = 0;
  for (const SweepRow& r : table.rows) ok += r.ok ? 1 : 0;
  std::cout << "sweep: " << ok << "/" << table.rows.size() << " horizons optimized";
  if (!table.averages_certified)
    std::cout << " (control region is a strict subdomain: T·J_s is an upper-bound reference only)";
  std::cout << "\n";
  for (const SweepRow& r : table.rows) {
    if (r.ok)
      std::cout << "  T = " << r.T << ": J_T/T = " << fmt17(r.JT_over_T)
                << ", J_s = " << fmt17(r.Js) << ", gap = " << fmt17(r.gap) << "\n";
    else
      std::cout << "  T = " << r.T << ": FAILED (" << r.note << ")\n";
  }
  std::cout << "wrote " << (out / "sweep.csv").string() << "\n";
  if (ok == 0) throw OptimizerFailure("all sweep rows failed");
  return kExitOk;
}

// Built-in oracle suite: fast, self-contained consistency checks against
// independently known answers.
int cmd_check(const RunConfig& cfg, const std::filesystem::path& out) {
  ordered_json checks = ordered_json::array();
  bool all_ok = true;
  auto record = [&](const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
    checks.push_back({{"name", name}, {"ok", ok}, {"detail", detail}});
    all_ok = all_ok && ok;
  };

  // 1. Adjoint gradient vs central finite differences on a small instance.
  {
    ProblemSpec spec;
    spec.domain = {0.0, 1.0};
    spec.control_region = {0.0, 0.6};
    spec.observation_region = {0.3, 1.0};
    spec.beta = 10.0;
    spec.horizon = 0.5;
    spec.target = Profile::constant(1.0);
    spec.initial = Profile::expression("sin(pi*x)");
    spec.f = Nonlinearity::power(1.0, 3.0);
    DiscretizationSpec disc{20, 20};
    DiscreteProblem dp = DiscreteProblem::make(spec, disc);

    std::mt19937 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Control u = Control::zeros(disc.nt, disc.nx, dp.dt);
    for (auto& step : u.steps)
      for (int j = 0; j < disc.nx; ++j)
        if (dp.omega.on[j]) step[j] = unif(rng);

    Control grad = gradient(spec, disc, u);
    double worst = 0.0;
    const double eps = 1e-5;
    for (int dir = 0; dir < 3; ++dir) {
      Control delta = Control::zeros(disc.nt, disc.nx, dp.dt);
      for (auto& step : delta.steps)
        for (int j = 0; j < disc.nx; ++j)
          if (dp.omega.on[j]) step[j] = unif(rng);
      double inner = 0.0;
      Control up = u, um = u;
      for (int i = 0; i < disc.nt; ++i)
        for (int j = 0; j < disc.nx; ++j) {
          inner += grad.steps[i][j] * delta.steps[i][j];
          up.steps[i][j] += eps * delta.steps[i][j];
          um.steps[i][j] -= eps * delta.steps[i][j];
        }
      inner *= dp.dt * dp.grid.h;
      double fd = (evaluate_cost(spec, disc, up).total -
                   evaluate_cost(spec, disc, um).total) / (2.0 * eps);
      worst = std::max(worst, std::fabs(fd - inner) / std::max(std::fabs(fd), 1e-12));
    }
    record("gradient_finite_difference", worst < 1e-6,
           "max relative error " + fmt17(worst) + " over 3 random directions");
  }

  // 2. Energy balance of the forward scheme.
  {
    ProblemSpec spec;
    spec.horizon = 0.5;
    spec.beta = 0.0;
    spec.control_region = {0.0, 1.0};
    spec.initial = Profile::expression("sin(pi*x)");
    spec.f = Nonlinearity::power(1.0, 3.0);
    DiscretizationSpec disc{100, 2000};
    Control zero = Control::zeros(disc.nt, disc.nx, spec.horizon / disc.nt);
    Trajectory y = solve_forward(spec, disc, zero);
    double r = energy_identity_residual(spec, disc, y, zero);
    record("energy_balance", r < 0.02, "relative defect " + fmt17(r));
  }

  // 3. Steady solve against the closed-form solution of -y'' = 1.
  {
    ProblemSpec spec;
    spec.f = Nonlinearity::zero();
    Grid g = Grid::make(0.0, 1.0, 199);
    Field one(g.nx, 1.0);
    Field y = solve_elliptic(spec, g, one);
    double worst = 0.0;
    for (int j = 0; j < g.nx; ++j) {
      double x = g.x(j);
      worst = std::max(worst, std::fabs(y[j] - 0.5 * x * (1.0 - x)));
    }
    record("elliptic_analytic", worst < 1e-10, "max node error " + fmt17(worst));
  }

  ordered_json rep;
  rep["command"] = "check";
  rep["config"] = cfg.to_json();
  rep["checks"] = checks;
  rep["all_ok"] = all_ok;
  write_json(out / "check_report.json", rep);

  if (!all_ok)
    throw SolveError(SolveError::Kind::NewtonStall, "self-check failed", 0, 0.0);
  return kExitOk;
}

int dispatch(const Args& args) {
  RunConfig cfg = parse_config_file(args.config_path);

  std::filesystem::path out(args.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw ConfigError("cannot create output directory \"" + out.string() + "\"");

  if (args.command == "solve") return cmd_solve(cfg, out);
  if (args.command == "steady") return cmd_steady(cfg, out);
  if (args.command == "optimize") return cmd_optimize(cfg, out);
  if (args.command == "turnpike") return cmd_turnpike(cfg, out);
  if (args.command == "sweep") return cmd_sweep(cfg, out, args.jobs);
  if (args.command == "check") return cmd_check(cfg, out);
  throw ConfigError("unknown command \"" + args.command +
                    "\" (solve, steady, optimize, turnpike, sweep, check)");
}

int fail(const Args& args, const std::string& kind, const std::string& message, int code) {
  ordered_json err;
  err["error"]["kind"] = kind;
  err["error"]["message"] = message;
  err["error"]["command"] = args.command;
  std::cout << err.dump() << "\n";
  std::error_code ec;
  std::filesystem::create_directories(args.out_dir, ec);
  if (!ec) {
    std::ofstream os(std::filesystem::path(args.out_dir) / "error.json");
    if (os) os << err.dump(2) << "\n";
  }
  return code;
}

}  // namespace

int run(const Args& args) {
  try {
    return dispatch(args);
  } catch (const ConfigError& e) {
    return fail(args, "config", e.what(), kExitConfig);
  } catch (const OptimizerFailure& e) {
    return fail(args, "optimizer", e.what(), kExitOptimizer);
  } catch (const SolveError& e) {
    return fail(args, "solver", e.what(), kExitSolver);
  } catch (const std::exception& e) {
    return fail(args, "solver", e.what(), kExitSolver);
  }
}

int main(int argc, const char* const* argv) {
  CLI::App app{
      "turnpike-lab — solve, optimize and diagnose the long-horizon behaviour "
      "of tracking-type optimal control for the 1-D semilinear heat equation"};
  app.require_subcommand(1);

  Args args;
  for (const char* name : {"solve", "steady", "optimize", "turnpike", "sweep", "check"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", args.config_path, "run configuration file")->required();
    sub->add_option("--out", args.out_dir, "output directory (default: out)");
    sub->add_option("--jobs", args.jobs, "worker threads for sweep rows")
        ->check(CLI::PositiveNumber);
    sub->callback([&args, name] { args.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitConfig;
  }
  return run(args);
}

}  // namespace turnpike::cli
