#pragma once

#include <vector>

#include "turnpike/parabolic.hpp"
#include "turnpike/problem.hpp"

namespace turnpike {

/// Discrete cost of a control:
///   J(u) = Δt Σ_{i<nt} 1/2 ‖U_i‖²_{L²(ω)}
///        + Δt Σ_{k=1..nt} β/2 ‖Y_k - z‖²_{L²(ω₀)}
/// (left rectangle rule in time; the tracking term runs over the post-step
/// snapshots, matching the adjoint recursion exactly).
CostBreakdown evaluate_cost(const ProblemSpec& spec, const DiscretizationSpec& disc,
                            const Control& u);

/// Gradient of the discrete cost with respect to the L²((0,T)×ω) inner
/// product:  G_i = U_i + q_i χ_ω, with q from solve_adjoint.  Entries off ω
/// are exactly zero.  Because the adjoint is the exact transpose of the
/// linearized forward sweep, this matches central finite differences of
/// evaluate_cost to near machine precision.
Control gradient(const ProblemSpec& spec, const DiscretizationSpec& disc,
                 const Control& u);

struct OptimizeOptions {
  /// Constant descent step.  <= 0 selects the conservative default
  /// 1 / (1 + β T), which is safe but slow; configs tuned to an instance
  /// should set this explicitly.
  double stepsize = 0.0;
  int max_iters = 500;
  /// Stop when ‖grad‖_{L²((0,T)×ω)} falls below this.
  double grad_tol = 1e-6;
  /// Divergence fallback budget: halve the step and restart (from the best
  /// iterate) at most this many times before giving up.
  int max_restarts = 5;
};

struct OptimizationResult {
  enum class Reason { GradTol, MaxIters, Diverged };

  Control control;
  Trajectory state;    ///< forward trajectory of the returned control
  Trajectory adjoint;  ///< matching adjoint trajectory
  CostBreakdown cost;
  std::vector<double> cost_history;       ///< J at iterate 0, 1, ...
  std::vector<double> grad_norm_history;  ///< ‖grad‖ at iterate 0, 1, ...
  double final_grad_norm = 0.0;
  double stepsize_used = 0.0;  ///< step in effect at termination (after halvings)
  int restarts = 0;
  int iterations = 0;
  Reason reason = Reason::MaxIters;
};

/// Minimizes the discrete cost by constant-stepsize gradient descent from
/// u0 — the method is deliberately plain; robustness comes from the
/// divergence fallback.  Three consecutive cost increases (or a state
/// blow-up at a trial iterate) count as divergence: the step is halved and
/// the iteration restarts from the best iterate seen, up to
/// opts.max_restarts times, after which the best iterate is returned with
/// reason = Diverged.  A blow-up at the *initial* control is not a stepsize
/// problem and propagates as SolveError.
OptimizationResult gradient_descent(const ProblemSpec& spec, const DiscretizationSpec& disc,
                                    const Control& u0, const OptimizeOptions& opts = {});

const char* to_string(OptimizationResult::Reason r);

}  // namespace turnpike
