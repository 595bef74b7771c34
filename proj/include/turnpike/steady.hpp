#pragma once

#include <string>

#include "turnpike/grid.hpp"
#include "turnpike/problem.hpp"

namespace turnpike {

/// Solves the steady state equation
///   -Δ_h y + f(y) = u_s χ_ω,   y = 0 on the walls,
/// by damped Newton iteration.  The Jacobian -Δ_h + diag(f'(y)) is
/// tridiagonal and strictly diagonally dominant (f' ≥ 0), so each Newton
/// step is one Thomas solve.  Step halving guards against overshoot on
/// strongly nonlinear f; for monotone f the solution is unique.
///
/// `initial_guess` (optional) warm-starts the iteration — the steady
/// optimizer passes the previous state.  Converges when the residual
/// ‖-Δ_h y + f(y) - u_s χ_ω‖_{L²} drops below `tol`.
/// Throws SolveError{NewtonStall} if 50 iterations or the damping floor are
/// exhausted.
Field solve_elliptic(const ProblemSpec& spec, const Grid& g, const Field& u_s,
                     const Field* initial_guess = nullptr, double tol = 1e-10);

/// Steady cost
///   J_s(u_s) = 1/2 ∫_ω u_s² + β/2 ∫_{ω₀} (y_s - z)²
/// where y_s solves the steady state equation for u_s (entries of u_s
/// outside ω are ignored).  If `state_out` is non-null the computed y_s is
/// stored there.
CostBreakdown steady_cost(const ProblemSpec& spec, const Grid& g, const Field& u_s,
                          Field* state_out = nullptr);

/// As steady_cost, but for a pair (u_s, y) already known to satisfy the
/// state equation — no elliptic solve.  Used by the cost-decomposition
/// diagnostics where y is a parabolic snapshot and u_s := -Δ_h y + f(y) by
/// construction.
CostBreakdown steady_cost_at_state(const ProblemSpec& spec, const Grid& g,
                                   const Field& u_s, const Field& y);

struct SteadyOptions {
  double grad_tol = 1e-7;  ///< stop when ‖ū + q̄‖_{L²(ω)} falls below this
  int max_iters = 50000;
  double initial_step = 1.0;
  double armijo_c = 1e-4;
};

/// A steady optimality triple and its diagnostics.
struct SteadyPair {
  Field control;  ///< ū, zero outside ω
  Field state;    ///< ȳ
  Field adjoint;  ///< q̄, solving -Δq̄ + f'(ȳ)q̄ = β(ȳ - z)χ_{ω₀}
  CostBreakdown cost;
  double grad_norm = 0.0;  ///< final ‖ū + q̄‖_{L²(ω)}
  int iterations = 0;
  bool converged = false;  ///< false: best iterate after max_iters (flagged, not thrown)
};

/// Minimizes J_s by gradient descent with Armijo backtracking, starting from
/// u_s = 0.  The gradient is u_s + q χ_ω with q from the linear steady
/// adjoint equation; each cost probe in the line search re-solves the state
/// equation warm-started from the current one.  Non-convergence within
/// max_iters is reported via `converged`, never thrown.
SteadyPair solve_steady_optimum(const ProblemSpec& spec, const Grid& g,
                                const SteadyOptions& opts = {});

/// How far a candidate triple is from satisfying the steady optimality
/// system: the max of the two PDE residuals (state and adjoint, in L²) and
/// the gradient norm ‖ū + q̄‖_{L²(ω)}.  Zero exactly at an optimal pair.
double steady_optimality_residual(const ProblemSpec& spec, const Grid& g,
                                  const SteadyPair& pair);

}  // namespace turnpike
