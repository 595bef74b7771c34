#include "turnpike/parabolic.hpp"

#include <cmath>
#include <stdexcept>

#include "turnpike/errors.hpp"

namespace turnpike {

// ---------------------------------------------------------------------------
// Control / Trajectory helpers
// ---------------------------------------------------------------------------

Control Control::zeros(int nt, int nx, double dt) {
  if (nt < 1 || nx < 1) throw std::invalid_argument("control: nt and nx must be >= 1");
  Control c;
  c.dt = dt;
  c.steps.assign(nt, Field(nx, 0.0));
  return c;
}

double Control::space_time_l2(const Grid& g) const {
  double s = 0.0;
  for (const Field& step : steps)
    for (double v : step) s += v * v;
  return std::sqrt(dt * g.h * s);
}

double Control::space_time_linf() const {
  double m = 0.0;
  for (const Field& step : steps)
    for (double v : step) m = std::max(m, std::fabs(v));
  return m;
}

double Trajectory::space_time_linf() const {
  double m = 0.0;
  for (const Field& s : states)
    for (double v : s) m = std::max(m, std::fabs(v));
  return m;
}

double Trajectory::time_derivative_l2(const Grid& g) const {
  double s = 0.0;
  for (size_t k = 0; k + 1 < states.size(); ++k) {
    for (size_t j = 0; j < states[k].size(); ++j) {
      double d = (states[k + 1][j] - states[k][j]) / dt;
      s += d * d;
    }
  }
  return std::sqrt(dt * g.h * s);
}

DiscreteProblem DiscreteProblem::make(const ProblemSpec& spec,
                                      const DiscretizationSpec& disc) {
  if (disc.nx < 1) throw std::invalid_argument("discretization: nx must be >= 1");
  if (disc.nt < 1) throw std::invalid_argument("discretization: nt must be >= 1");
  DiscreteProblem dp;
  dp.grid = Grid::make(spec.domain.lo, spec.domain.hi, disc.nx);
  dp.omega = interval_mask(dp.grid, spec.control_region.lo, spec.control_region.hi);
  dp.omega0 = interval_mask(dp.grid, spec.observation_region.lo, spec.observation_region.hi);
  dp.z = sample(dp.grid, spec.target);
  dp.y0 = sample(dp.grid, spec.initial);
  dp.beta = spec.beta;
  dp.nt = disc.nt;
  dp.dt = spec.horizon / disc.nt;
  dp.f = spec.f;
  return dp;
}

// ---------------------------------------------------------------------------
// Forward sweep
// ---------------------------------------------------------------------------

Field step_semi_implicit(const Grid& g, const Field& y, const Field& source,
                         double dt, const Nonlinearity& f) {
  if (y.size() != source.size() || static_cast<int>(y.size()) != g.nx)
    throw std::invalid_argument("step_semi_implicit: field sizes do not match grid");
  if (!(dt > 0.0)) throw std::invalid_argument("step_semi_implicit: dt must be > 0");
  Field rhs(y.size());
  for (size_t j = 0; j < y.size(); ++j) rhs[j] = y[j] / dt - f.f(y[j]) + source[j];
  return solve_shifted_laplacian(g, 1.0 / dt, rhs);
}

namespace {

// Suggested stable time step when the explicit reaction term blows up:
// the linearization of y' = -f(y) has rate f'(‖y₀‖_∞), and a factor-2 safety
// margin on top of the usual Δt·rate < 1 gives Δt ≈ 1/(2 f'(‖y₀‖_∞)); for
// the cubic this is the familiar 1/(6 ‖y₀‖²_∞).
double suggest_dt(const DiscreteProblem& dp) {
  double y0max = 0.0;
  for (double v : dp.y0) y0max = std::max(y0max, std::fabs(v));
  double rate = std::max(dp.f.df(y0max), 1.0);
  return std::min(0.5 / rate, 0.5 * dp.dt);
}

void check_control_shape(const DiscreteProblem& dp, const Control& u) {
  if (u.nt() != dp.nt)
    throw std::invalid_argument("control: expected " + std::to_string(dp.nt) +
                                " steps, got " + std::to_string(u.nt()));
  for (const Field& step : u.steps) {
    if (static_cast<int>(step.size()) != dp.grid.nx)
      throw std::invalid_argument("control: step size does not match grid");
  }
  for (const Field& step : u.steps)
    for (size_t j = 0; j < step.size(); ++j)
      if (!dp.omega.on[j] && step[j] != 0.0)
        throw std::invalid_argument(
            "control: nonzero entry outside the control region");
}

}  // namespace

void solve_forward_into(const DiscreteProblem& dp, const Control& u, Trajectory& out) {
  check_control_shape(dp, u);

  const Grid& g = dp.grid;
  const int nx = g.nx;
  ShiftedLaplacian stepper(g, 1.0 / dp.dt);

  out.dt = dp.dt;
  out.provenance = "forward";
  out.states.resize(dp.nt + 1);
  out.states[0] = dp.y0;

  Field rhs(nx);
  for (int i = 0; i < dp.nt; ++i) {
    const Field& y = out.states[i];
    const Field& ui = u.steps[i];
    for (int j = 0; j < nx; ++j) rhs[j] = y[j] / dp.dt - dp.f.f(y[j]) + ui[j];
    stepper.solve(rhs, out.states[i + 1]);

    // A single accumulation detects NaN/Inf anywhere in the new state.
    double probe = 0.0;
    for (double v : out.states[i + 1]) probe += v;
    if (!std::isfinite(probe)) {
      throw SolveError(SolveError::Kind::BlowUp,
                       "state blew up at step " + std::to_string(i + 1) + " (t = " +
                           std::to_string((i + 1) * dp.dt) + "); try dt <= " +
                           std::to_string(suggest_dt(dp)),
                       i + 1, (i + 1) * dp.dt, suggest_dt(dp));
    }
  }
}

Trajectory solve_forward(const ProblemSpec& spec, const DiscretizationSpec& disc,
                         const Control& u) {
  DiscreteProblem dp = DiscreteProblem::make(spec, disc);
  Trajectory out;
  solve_forward_into(dp, u, out);
  return out;
}

// ---------------------------------------------------------------------------
// Adjoint sweep
// ---------------------------------------------------------------------------
//
// The discrete cost is
//   J = Δt Σ_{i<nt} ½‖U_i‖² + Δt Σ_{k=1..nt} (β/2)‖(Y_k - z)χ_{ω₀}‖²,
// with Y_{k+1} = A⁻¹(Y_k - Δt f(Y_k) + Δt U_k χ_ω), A = I - Δt Δ_h.
// Lagrange multipliers for the step constraints satisfy the transposed
// linearized recursion; written in terms of q_k (so that the gradient w.r.t.
// the L²((0,T)×ω) inner product is U_i + q_i χ_ω) it reads
//
//   q_nt = 0,
//   A q_k = q_{k+1} - Δt f'(Y_{k+1}) q_{k+1} + Δt β (Y_{k+1} - z) χ_{ω₀}.
//
// A is symmetric in the h-weighted inner product, so the same Thomas
// factorization drives both sweeps.  Every tracking snapshot Y_1..Y_nt
// enters exactly once, mirroring the quadrature of the cost; this exactness
// is what the finite-difference and dense-transpose oracles in the test
// suite pin down.

void solve_adjoint_into(const DiscreteProblem& dp, const Trajectory& y, Trajectory& out) {
  if (y.nt() != dp.nt)
    throw std::invalid_argument("adjoint: trajectory does not match discretization");
  const Grid& g = dp.grid;
  const int nx = g.nx;
  ShiftedLaplacian stepper(g, 1.0 / dp.dt);

  out.dt = dp.dt;
  out.provenance = "adjoint";
  out.states.resize(dp.nt + 1);
  out.states[dp.nt] = Field(nx, 0.0);

  Field rhs(nx);
  for (int k = dp.nt - 1; k >= 0; --k) {
    const Field& qn = out.states[k + 1];
    const Field& yn = y.states[k + 1];
    for (int j = 0; j < nx; ++j) {
      double track = dp.omega0.on[j] ? dp.beta * (yn[j] - dp.z[j]) : 0.0;
      rhs[j] = qn[j] / dp.dt - dp.f.df(yn[j]) * qn[j] + track;
    }
    stepper.solve(rhs, out.states[k]);
  }
}

Trajectory solve_adjoint(const ProblemSpec& spec, const DiscretizationSpec& disc,
                         const Trajectory& y) {
  DiscreteProblem dp = DiscreteProblem::make(spec, disc);
  Trajectory out;
  solve_adjoint_into(dp, y, out);
  return out;
}

// ---------------------------------------------------------------------------
// Energy balance
// ---------------------------------------------------------------------------

double energy_identity_residual(const ProblemSpec& spec, const DiscretizationSpec& disc,
                                const Trajectory& y, const Control& h_source) {
  DiscreteProblem dp = DiscreteProblem::make(spec, disc);
  if (y.nt() != dp.nt || h_source.nt() != dp.nt)
    throw std::invalid_argument("energy balance: trajectory/source do not match discretization");
  const Grid& g = dp.grid;

  double lhs = 0.0;
  for (const Field& hi : h_source.steps)
    for (double v : hi) lhs += v * v;
  lhs *= dp.dt * g.h;

  double dtot = 0.0;
  for (int i = 0; i < dp.nt; ++i) {
    const Field& a = y.states[i];
    const Field& b = y.states[i + 1];
    for (int j = 0; j < g.nx; ++j) {
      double d = (b[j] - a[j]) / dp.dt;
      dtot += d * d;
    }
  }
  dtot *= dp.dt * g.h;

  double etot = 0.0;
  for (int k = 1; k <= dp.nt; ++k) {
    Field lap = laplacian_apply(g, y.states[k]);
    for (int j = 0; j < g.nx; ++j) {
      double e = -lap[j] + dp.f.f(y.states[k][j]);
      etot += e * e;
    }
  }
  etot *= dp.dt * g.h;

  auto stored_energy = [&](const Field& v) {
    double grad = norm(g, v, NormKind::H10);
    double pot = 0.0;
    for (double vj : v) pot += dp.f.F(vj);
    return grad * grad + 2.0 * g.h * pot;
  };
  double boundary = stored_energy(y.states[dp.nt]) - stored_energy(y.states[0]);

  double rhs = dtot + etot + boundary;
  return std::fabs(lhs - rhs) / std::max(lhs, 1.0);
}

}  // namespace turnpike
