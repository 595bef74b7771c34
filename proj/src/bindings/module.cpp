// Python bindings for the core library.  Field/Control data crosses the
// boundary as plain lists (copies); the heavy solves release the GIL.

#include <optional>
#include <utility>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "turnpike/config.hpp"
#include "turnpike/errors.hpp"
#include "turnpike/optimize.hpp"
#include "turnpike/parabolic.hpp"
#include "turnpike/problem.hpp"
#include "turnpike/steady.hpp"
#include "turnpike/turnpike.hpp"

namespace py = pybind11;
using namespace turnpike;

namespace {

py::object json_to_py(const nlohmann::ordered_json& j) {
    py::object loads = py::module_::import("json").attr("loads");
    return loads(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Optimal control of the semilinear heat equation: forward/adjoint "
              "solvers, time-horizon and steady optimizers, and turnpike "
              "diagnostics on a uniform 1-D grid.";
    m.attr("__version__") = "0.1.0";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<SolveError>(m, "SolveError", PyExc_RuntimeError);

    // -- problem description -------------------------------------------------

    py::class_<Interval>(m, "Interval")
        .def(py::init([](double lo, double hi) { return Interval{lo, hi}; }),
             py::arg("lo"), py::arg("hi"))
        .def_readwrite("lo", &Interval::lo)
        .def_readwrite("hi", &Interval::hi)
        .def("length", &Interval::length)
        .def("__repr__", [](const Interval& i) {
            return "Interval(" + std::to_string(i.lo) + ", " + std::to_string(i.hi) + ")";
        });

    py::class_<Profile>(m, "Profile")
        .def_static("constant", &Profile::constant, py::arg("value"))
        .def_static("expression", &Profile::expression, py::arg("text"),
                    "Closed-form expression of x, e.g. '2*sin(pi*x)'.")
        .def("__call__", &Profile::operator(), py::arg("x"))
        .def_property_readonly("text", &Profile::text)
        .def("__repr__", [](const Profile& p) { return "Profile('" + p.text() + "')"; });

    py::class_<Nonlinearity>(m, "Nonlinearity")
        .def_static("power", &Nonlinearity::power, py::arg("coeff"), py::arg("exponent"),
                    "f(y) = coeff * sign(y) * |y|^exponent")
        .def_static("zero", &Nonlinearity::zero)
        .def_static("tabulated", &Nonlinearity::tabulated, py::arg("samples"),
                    "Monotone C1 interpolant through [(y, f(y)), ...] samples.")
        .def("f", &Nonlinearity::f, py::arg("y"))
        .def("df", &Nonlinearity::df, py::arg("y"))
        .def("F", &Nonlinearity::F, py::arg("y"), "Primitive with F(0) = 0.")
        .def_property_readonly("name", &Nonlinearity::name)
        .def("__repr__", [](const Nonlinearity& f) {
            return "Nonlinearity(" + f.name() + ")";
        });

    py::class_<ProblemSpec>(m, "ProblemSpec")
        .def(py::init<>())
        .def_readwrite("domain", &ProblemSpec::domain)
        .def_readwrite("control_region", &ProblemSpec::control_region)
        .def_readwrite("observation_region", &ProblemSpec::observation_region)
        .def_readwrite("beta", &ProblemSpec::beta)
        .def_readwrite("horizon", &ProblemSpec::horizon)
        .def_readwrite("target", &ProblemSpec::target)
        .def_readwrite("initial", &ProblemSpec::initial)
        .def_readwrite("f", &ProblemSpec::f);

    py::class_<DiscretizationSpec>(m, "DiscretizationSpec")
        .def(py::init([](int nx, int nt) { return DiscretizationSpec{nx, nt}; }),
             py::arg("nx"), py::arg("nt"))
        .def_readwrite("nx", &DiscretizationSpec::nx)
        .def_readwrite("nt", &DiscretizationSpec::nt)
        .def("dt", &DiscretizationSpec::dt, py::arg("spec"));

    py::class_<CostBreakdown>(m, "CostBreakdown")
        .def_readonly("total", &CostBreakdown::total)
        .def_readonly("control_term", &CostBreakdown::control_term)
        .def_readonly("tracking_term", &CostBreakdown::tracking_term)
        .def("__repr__", [](const CostBreakdown& c) {
            return "CostBreakdown(total=" + std::to_string(c.total) + ")";
        });

    m.def("validate_spec", &validate_spec, py::arg("spec"),
          "One human-readable message per violation; empty means valid.");

    // -- grid ----------------------------------------------------------------

    py::class_<Grid>(m, "Grid")
        .def_static("make", &Grid::make, py::arg("a"), py::arg("b"), py::arg("nx"))
        .def_readonly("a", &Grid::a)
        .def_readonly("b", &Grid::b)
        .def_readonly("nx", &Grid::nx)
        .def_readonly("h", &Grid::h)
        .def("x", &Grid::x, py::arg("i"))
        .def("nodes", [](const Grid& g) {
            std::vector<double> xs(g.nx);
            for (int i = 0; i < g.nx; ++i) xs[i] = g.x(i);
            return xs;
        }, "Interior node coordinates, left to right.")
        .def("lambda_min", &Grid::lambda_min);

    py::class_<Mask>(m, "Mask")
        .def_readonly("count", &Mask::count)
        .def_property_readonly("on", [](const Mask& m_) {
            std::vector<bool> v(m_.on.begin(), m_.on.end());
            return v;
        })
        .def("covers_all", &Mask::covers_all)
        .def("measure", &Mask::measure, py::arg("grid"));

    py::enum_<NormKind>(m, "NormKind")
        .value("L2", NormKind::L2)
        .value("Linf", NormKind::Linf)
        .value("H10", NormKind::H10);

    m.def("make_grid", &make_grid, py::arg("spec"), py::arg("disc"));
    m.def("sample", &sample, py::arg("grid"), py::arg("profile"));
    m.def("interval_mask", &interval_mask, py::arg("grid"), py::arg("lo"), py::arg("hi"));
    m.def("norm", &norm, py::arg("grid"), py::arg("values"), py::arg("kind"));
    m.def("inner_l2", &inner_l2, py::arg("grid"), py::arg("u"), py::arg("v"));
    m.def("masked_l2", &masked_l2, py::arg("grid"), py::arg("values"), py::arg("mask"));
    m.def("masked_linf", &masked_linf, py::arg("values"), py::arg("mask"));
    m.def("laplacian_apply", &laplacian_apply, py::arg("grid"), py::arg("values"));
    m.def("solve_shifted_laplacian", &solve_shifted_laplacian,
          py::arg("grid"), py::arg("sigma"), py::arg("rhs"),
          "Solves (sigma*I - Lap) v = rhs.");

    // -- forward / adjoint solves --------------------------------------------

    py::class_<Control>(m, "Control")
        .def_static("zeros", &Control::zeros, py::arg("nt"), py::arg("nx"), py::arg("dt"))
        .def_readonly("dt", &Control::dt)
        .def_property("steps",
                      [](const Control& c) { return c.steps; },
                      [](Control& c, std::vector<Field> s) { c.steps = std::move(s); },
                      "Per-step control fields.  Reading returns a copy; mutate "
                      "via assignment or set_step.")
        .def("step", [](const Control& c, int i) { return c.steps.at(i); }, py::arg("i"))
        .def("set_step", [](Control& c, int i, Field v) { c.steps.at(i) = std::move(v); },
             py::arg("i"), py::arg("values"))
        .def("nt", &Control::nt)
        .def("space_time_l2", &Control::space_time_l2, py::arg("grid"))
        .def("space_time_linf", &Control::space_time_linf);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("dt", &Trajectory::dt)
        .def_property_readonly("states",
                               [](const Trajectory& y) { return y.states; },
                               "Snapshots at t_k = k*dt (copies).")
        .def_readonly("provenance", &Trajectory::provenance)
        .def("nt", &Trajectory::nt)
        .def("time", &Trajectory::time, py::arg("k"))
        .def("state", [](const Trajectory& y, int k) { return y.states.at(k); },
             py::arg("k"))
        .def("space_time_linf", &Trajectory::space_time_linf)
        .def("time_derivative_l2", &Trajectory::time_derivative_l2, py::arg("grid"));

    m.def("solve_forward", &solve_forward, py::arg("spec"), py::arg("disc"),
          py::arg("control"), py::call_guard<py::gil_scoped_release>(),
          "Marches the state equation; raises SolveError on blow-up.");
    m.def("solve_adjoint", &solve_adjoint, py::arg("spec"), py::arg("disc"),
          py::arg("state"), py::call_guard<py::gil_scoped_release>());
    m.def("energy_identity_residual", &energy_identity_residual,
          py::arg("spec"), py::arg("disc"), py::arg("state"), py::arg("source"),
          py::call_guard<py::gil_scoped_release>(),
          "Relative defect of the discrete energy balance; O(dt) under refinement.");

    // -- cost and its gradient -----------------------------------------------

    m.def("evaluate_cost", &evaluate_cost, py::arg("spec"), py::arg("disc"),
          py::arg("control"), py::call_guard<py::gil_scoped_release>());
    m.def("gradient", &gradient, py::arg("spec"), py::arg("disc"), py::arg("control"),
          py::call_guard<py::gil_scoped_release>(),
          "Exact gradient of the discrete cost in L2((0,T) x omega).");

    py::class_<OptimizeOptions>(m, "OptimizeOptions")
        .def(py::init<>())
        .def_readwrite("stepsize", &OptimizeOptions::stepsize)
        .def_readwrite("max_iters", &OptimizeOptions::max_iters)
        .def_readwrite("grad_tol", &OptimizeOptions::grad_tol)
        .def_readwrite("max_restarts", &OptimizeOptions::max_restarts);

    auto opt_result = py::class_<OptimizationResult>(m, "OptimizationResult");
    py::enum_<OptimizationResult::Reason>(opt_result, "Reason")
        .value("GradTol", OptimizationResult::Reason::GradTol)
        .value("MaxIters", OptimizationResult::Reason::MaxIters)
        .value("Diverged", OptimizationResult::Reason::Diverged);
    opt_result
        .def_readonly("control", &OptimizationResult::control)
        .def_readonly("state", &OptimizationResult::state)
        .def_readonly("adjoint", &OptimizationResult::adjoint)
        .def_readonly("cost", &OptimizationResult::cost)
        .def_readonly("cost_history", &OptimizationResult::cost_history)
        .def_readonly("grad_norm_history", &OptimizationResult::grad_norm_history)
        .def_readonly("final_grad_norm", &OptimizationResult::final_grad_norm)
        .def_readonly("stepsize_used", &OptimizationResult::stepsize_used)
        .def_readonly("restarts", &OptimizationResult::restarts)
        .def_readonly("iterations", &OptimizationResult::iterations)
        .def_readonly("reason", &OptimizationResult::reason)
        .def_property_readonly("reason_name", [](const OptimizationResult& r) {
            return std::string(to_string(r.reason));
        });

    m.def("gradient_descent", &gradient_descent, py::arg("spec"), py::arg("disc"),
          py::arg("u0"), py::arg_v("opts", OptimizeOptions(), "OptimizeOptions()"),
          py::call_guard<py::gil_scoped_release>(),
          "Constant-step descent with divergence fallback (halve and restart).");

    // -- steady problem -------------------------------------------------------

    m.def("solve_elliptic",
          [](const ProblemSpec& spec, const Grid& g, const Field& u,
             std::optional<Field> guess, double tol) {
              return solve_elliptic(spec, g, u, guess ? &*guess : nullptr, tol);
          },
          py::arg("spec"), py::arg("grid"), py::arg("control"),
          py::arg("initial_guess") = std::nullopt, py::arg("tol") = 1e-10,
          "Damped-Newton solve of -Lap y + f(y) = u on omega; raises SolveError "
          "on a stall.");

    m.def("steady_cost",
          [](const ProblemSpec& spec, const Grid& g, const Field& u) {
              Field y;
              CostBreakdown c = steady_cost(spec, g, u, &y);
              return std::make_pair(c, y);
          },
          py::arg("spec"), py::arg("grid"), py::arg("control"),
          "Returns (cost, steady state) for a steady control.");

    py::class_<SteadyOptions>(m, "SteadyOptions")
        .def(py::init<>())
        .def_readwrite("grad_tol", &SteadyOptions::grad_tol)
        .def_readwrite("max_iters", &SteadyOptions::max_iters)
        .def_readwrite("initial_step", &SteadyOptions::initial_step)
        .def_readwrite("armijo_c", &SteadyOptions::armijo_c);

    py::class_<SteadyPair>(m, "SteadyPair")
        .def_readonly("control", &SteadyPair::control)
        .def_readonly("state", &SteadyPair::state)
        .def_readonly("adjoint", &SteadyPair::adjoint)
        .def_readonly("cost", &SteadyPair::cost)
        .def_readonly("grad_norm", &SteadyPair::grad_norm)
        .def_readonly("iterations", &SteadyPair::iterations)
        .def_readonly("converged", &SteadyPair::converged);

    m.def("solve_steady_optimum", &solve_steady_optimum, py::arg("spec"), py::arg("grid"),
          py::arg_v("opts", SteadyOptions(), "SteadyOptions()"),
          py::call_guard<py::gil_scoped_release>(),
          "Armijo gradient descent on the steady cost from u = 0.");
    m.def("steady_optimality_residual", &steady_optimality_residual,
          py::arg("spec"), py::arg("grid"), py::arg("pair"),
          "Max of the two PDE residuals and the gradient norm; 0 at an optimum.");

    // -- turnpike diagnostics --------------------------------------------------

    py::class_<DistanceCurves>(m, "DistanceCurves")
        .def_readonly("dt", &DistanceCurves::dt)
        .def_readonly("d_y", &DistanceCurves::d_y)
        .def_readonly("d_u", &DistanceCurves::d_u);

    m.def("distance_curves", &distance_curves, py::arg("grid"), py::arg("omega"),
          py::arg("opt"), py::arg("steady"));
    m.def("entry_time", &entry_time, py::arg("state"), py::arg("delta"));

    py::class_<ExpFit>(m, "ExpFit")
        .def_readonly("K", &ExpFit::K)
        .def_readonly("mu", &ExpFit::mu)
        .def_readonly("residual", &ExpFit::residual)
        .def_readonly("samples", &ExpFit::samples)
        .def_readonly("clipped", &ExpFit::clipped)
        .def("__repr__", [](const ExpFit& f) {
            return "ExpFit(K=" + std::to_string(f.K) + ", mu=" + std::to_string(f.mu) + ")";
        });

    m.def("fit_exponential_rates", &fit_exponential_rates,
          py::arg("t"), py::arg("d"), py::arg("t_lo"), py::arg("t_hi"),
          "Log-space least squares of d(t) ~ K exp(-mu t) over [t_lo, t_hi].");

    py::class_<TurnpikeOptions>(m, "TurnpikeOptions")
        .def(py::init<>())
        .def_readwrite("delta", &TurnpikeOptions::delta);

    py::class_<TurnpikeReport>(m, "TurnpikeReport")
        .def_readonly("delta", &TurnpikeReport::delta)
        .def_readonly("t_entry", &TurnpikeReport::t_entry)
        .def_readonly("entry_fit", &TurnpikeReport::entry_fit)
        .def_readonly("exit_fit", &TurnpikeReport::exit_fit)
        .def_readonly("plateau_dy", &TurnpikeReport::plateau_dy)
        .def_readonly("plateau_total", &TurnpikeReport::plateau_total)
        .def_readonly("cost_gap", &TurnpikeReport::cost_gap)
        .def_readonly("confirmed", &TurnpikeReport::confirmed)
        .def_readonly("note", &TurnpikeReport::note)
        .def_readonly("curves", &TurnpikeReport::curves);

    m.def("make_turnpike_report", &make_turnpike_report,
          py::arg("spec"), py::arg("disc"), py::arg("opt"), py::arg("steady"),
          py::arg_v("opts", TurnpikeOptions(), "TurnpikeOptions()"),
          py::call_guard<py::gil_scoped_release>());

    py::class_<SweepRow>(m, "SweepRow")
        .def_readonly("T", &SweepRow::T)
        .def_readonly("JT", &SweepRow::JT)
        .def_readonly("JT_over_T", &SweepRow::JT_over_T)
        .def_readonly("Js", &SweepRow::Js)
        .def_readonly("gap", &SweepRow::gap)
        .def_readonly("yt_l2", &SweepRow::yt_l2)
        .def_readonly("ratio", &SweepRow::ratio)
        .def_readonly("ok", &SweepRow::ok)
        .def_readonly("note", &SweepRow::note)
        .def("__repr__", [](const SweepRow& r) {
            return "SweepRow(T=" + std::to_string(r.T) + ", JT=" + std::to_string(r.JT) + ")";
        });

    py::class_<SweepTable>(m, "SweepTable")
        .def_readonly("rows", &SweepTable::rows)
        .def_readonly("averages_certified", &SweepTable::averages_certified);

    m.def("averages_sweep", &averages_sweep, py::arg("spec"), py::arg("dt"),
          py::arg("nx"), py::arg("horizons"),
          py::arg_v("opt_opts", OptimizeOptions(), "OptimizeOptions()"),
          py::arg_v("steady_opts", SteadyOptions(), "SteadyOptions()"),
          py::arg("jobs") = 1, py::call_guard<py::gil_scoped_release>(),
          "Optimizes each horizon at fixed dt and h against one shared steady optimum.");

    py::class_<CostDecomposition>(m, "CostDecomposition")
        .def_readonly("steady_term", &CostDecomposition::steady_term)
        .def_readonly("kinetic_term", &CostDecomposition::kinetic_term)
        .def_readonly("boundary_term", &CostDecomposition::boundary_term)
        .def_readonly("reconstructed", &CostDecomposition::reconstructed)
        .def_readonly("direct", &CostDecomposition::direct)
        .def_readonly("mismatch", &CostDecomposition::mismatch);

    m.def("representation_decomposition", &representation_decomposition,
          py::arg("spec"), py::arg("disc"), py::arg("control"),
          py::call_guard<py::gil_scoped_release>(),
          "Steady + kinetic + boundary rewriting of the cost; needs omega = Omega.");

    py::class_<QuasiOptimalResult>(m, "QuasiOptimalResult")
        .def_readonly("control", &QuasiOptimalResult::control)
        .def_readonly("cost", &QuasiOptimalResult::cost)
        .def_readonly("excess", &QuasiOptimalResult::excess);

    m.def("quasi_optimal_strategy", &quasi_optimal_strategy,
          py::arg("spec"), py::arg("disc"), py::arg("steady"), py::arg("tau"),
          py::arg("kappa") = 10.0,
          py::arg("optimal_cost") = std::numeric_limits<double>::quiet_NaN(),
          py::call_guard<py::gil_scoped_release>(),
          "Feedback toward the steady pair until tau, then hold the steady control.");

    // -- configuration ----------------------------------------------------------

    py::class_<RunConfig::TurnpikeSection>(m, "TurnpikeSection")
        .def_readwrite("delta", &RunConfig::TurnpikeSection::delta)
        .def_readwrite("tau", &RunConfig::TurnpikeSection::tau)
        .def_readwrite("kappa", &RunConfig::TurnpikeSection::kappa);

    py::class_<RunConfig::SweepSection>(m, "SweepSection")
        .def_readwrite("horizons", &RunConfig::SweepSection::horizons)
        .def_readwrite("dt", &RunConfig::SweepSection::dt)
        .def_readwrite("nx", &RunConfig::SweepSection::nx);

    py::class_<RunConfig>(m, "RunConfig")
        .def_readwrite("problem", &RunConfig::problem)
        .def_readwrite("disc", &RunConfig::disc)
        .def_readwrite("optimizer", &RunConfig::optimizer)
        .def_readwrite("steady", &RunConfig::steady)
        .def_readwrite("turnpike", &RunConfig::turnpike)
        .def_readwrite("sweep", &RunConfig::sweep)
        .def_readwrite("seed", &RunConfig::seed)
        .def("to_dict", [](const RunConfig& c) { return json_to_py(c.to_json()); },
             "Every resolved setting as a plain dict.");

    m.def("parse_config_text", &parse_config_text, py::arg("text"),
          "Parses 'section.key = value' text; raises ConfigError with the full "
          "list of problems.");
    m.def("parse_config_file", &parse_config_file, py::arg("path"));
}
