#pragma once

#include <string>
#include <vector>

#include "turnpike/grid.hpp"
#include "turnpike/problem.hpp"

namespace turnpike {

/// Piecewise-constant-in-time control: steps[i] is the field applied on
/// [t_i, t_{i+1}), i = 0 .. nt-1.  Entries outside the control region are
/// identically zero; solve_forward rejects controls that violate this.
struct Control {
  double dt = 0.0;
  std::vector<Field> steps;

  int nt() const { return static_cast<int>(steps.size()); }
  static Control zeros(int nt, int nx, double dt);

  /// sqrt(Δt Σ_i h Σ_j v², the L²((0,T)×Ω) norm of the piecewise-constant
  /// interpolant.
  double space_time_l2(const Grid& g) const;
  /// max_{i,j} |steps[i][j]|.
  double space_time_linf() const;
};

/// States at the nt+1 time stamps t_k = k Δt; states[0] is the sampled
/// initial datum.  `provenance` records which operation produced the object
/// (forward solve, adjoint sweep, ...), for report headers.
struct Trajectory {
  double dt = 0.0;
  std::vector<Field> states;
  std::string provenance;

  int nt() const { return static_cast<int>(states.size()) - 1; }
  double time(int k) const { return k * dt; }

  /// max over all snapshots and nodes of |y|.
  double space_time_linf() const;
  /// sqrt(Σ_i Δt ‖(Y_{i+1}-Y_i)/Δt‖²_{L²}): the L²((0,T)×Ω) norm of the
  /// forward-difference time derivative.
  double time_derivative_l2(const Grid& g) const;
};

/// Everything solve_forward and friends need, precomputed once: the grid,
/// node indicators of ω and ω₀, and the sampled target/initial profiles.
/// Purely a convenience/performance cache — all public operations that take
/// (spec, disc) build one internally.
struct DiscreteProblem {
  Grid grid;
  Mask omega;    ///< control region indicator
  Mask omega0;   ///< observation region indicator
  Field z;       ///< sampled target
  Field y0;      ///< sampled initial datum
  double beta = 0.0;
  double dt = 0.0;
  int nt = 0;
  Nonlinearity f = Nonlinearity::zero();

  static DiscreteProblem make(const ProblemSpec& spec, const DiscretizationSpec& disc);
};

/// One step of the semi-implicit scheme: diffusion implicit, reaction and
/// source explicit.  Returns
///   Y_{i+1} = (I/Δt - Δ_h)⁻¹ (Y_i/Δt - f(Y_i) + source)
/// where `source` is the control already restricted to ω (or any right-hand
/// side).  The scheme is unconditionally stable for the linear part; the
/// explicit reaction term is what limits Δt for large data.
Field step_semi_implicit(const Grid& g, const Field& y, const Field& source,
                         double dt, const Nonlinearity& f);

/// Marches the state equation from the sampled y₀ under control u.
/// Preconditions: u has disc.nt steps of size disc.nx with support inside ω.
/// Throws SolveError{BlowUp} at the first non-finite state, reporting the
/// offending step index and a suggested smaller Δt.
Trajectory solve_forward(const ProblemSpec& spec, const DiscretizationSpec& disc,
                         const Control& u);

/// Backward sweep of the adjoint recursion, starting from q(T) = 0:
///
///   q_k = (I/Δt - Δ_h)⁻¹ [ q_{k+1}/Δt - f'(Y_{k+1}) q_{k+1}
///                          + β (Y_{k+1} - z) χ_{ω₀} ],   k = nt-1 .. 0.
///
/// Each step is the exact transpose of the linearization of the forward
/// step, so  u + q χ_ω  is the exact gradient of the discrete cost (not an
/// O(Δt) approximation); the optimize module relies on this.
Trajectory solve_adjoint(const ProblemSpec& spec, const DiscretizationSpec& disc,
                         const Trajectory& y);

/// Relative defect of the discrete energy balance for a trajectory driven by
/// a source h on all of Ω (take ω = Ω to produce one):
///
///   ∫∫ h²  vs  ∫∫ [ y_t² + (-Δy + f(y))² ]
///              + [ ‖y(T)‖²_{H¹₀} + 2∫F(y(T)) - ‖y₀‖²_{H¹₀} - 2∫F(y₀) ]
///
/// with y_t by forward differences, the elliptic term sampled at the
/// post-step snapshots Y_1..Y_nt, and rectangle-rule time quadrature.
/// Returns |lhs - rhs| / max(lhs, 1).  The balance is exact for the
/// semi-discrete flow, so the value decays like O(Δt) under time refinement.
double energy_identity_residual(const ProblemSpec& spec, const DiscretizationSpec& disc,
                                const Trajectory& y, const Control& h_source);

// ---------------------------------------------------------------------------
// Allocation-reusing variants used by the optimizer's inner loop.
// ---------------------------------------------------------------------------

/// As solve_forward, writing into `out` (storage reused across calls).
void solve_forward_into(const DiscreteProblem& dp, const Control& u, Trajectory& out);

/// As solve_adjoint, writing into `out`.
void solve_adjoint_into(const DiscreteProblem& dp, const Trajectory& y, Trajectory& out);

}  // namespace turnpike
