#pragma once

#include <limits>
#include <string>
#include <vector>

#include "turnpike/optimize.hpp"
#include "turnpike/steady.hpp"

namespace turnpike {

/// Sup-norm distances between a time-horizon optimum and the steady optimum:
///   d_y(t_k) = ‖Y_k - ȳ‖_{L∞(Ω)},  k = 0..nt   (nt+1 samples)
///   d_u(t_k) = ‖U_k - ū‖_{L∞(ω)},  k = 0..nt-1 (one per control step)
struct DistanceCurves {
  double dt = 0.0;
  std::vector<double> d_y;
  std::vector<double> d_u;
};

DistanceCurves distance_curves(const Grid& g, const Mask& omega,
                               const OptimizationResult& opt, const SteadyPair& steady);

/// First time stamp at which ‖y(t)‖_{L∞} dips below `delta`; returns the
/// final time T when the threshold is never reached (the infimum of an
/// empty set over [0, T]).
double entry_time(const Trajectory& y, double delta);

/// Least-squares fit of  d(t) ≈ K e^{-μ t}  over the samples with
/// t_lo <= t <= t_hi, done in log space.  Values below 1e-14 are clipped to
/// 1e-14 before taking logs (counted in `clipped`).  `residual` is the RMS
/// log-misfit, so e^residual is the typical multiplicative scatter.
/// Throws std::invalid_argument when the window holds fewer than 3 samples.
struct ExpFit {
  double K = 0.0;
  double mu = 0.0;
  double residual = 0.0;
  int samples = 0;
  int clipped = 0;
};

ExpFit fit_exponential_rates(const std::vector<double>& t, const std::vector<double>& d,
                             double t_lo, double t_hi);

struct TurnpikeOptions {
  /// Smallness threshold for the entry time; <= 0 selects the default
  /// 1.1 ‖ȳ‖_∞ + 0.05 ‖y₀‖_∞ (just above the steady plateau, scaled to the
  /// initial transient).
  double delta = 0.0;
};

/// One complete turnpike diagnosis of an optimized trajectory.  Windows are
/// fixed functions of the data so reports are reproducible: the entry fit
/// uses [t_entry, t_entry + min(T/4, 2)] on d_y + d_u; the exit fit applies
/// the same fit to the time-reversed series on the final window of the same
/// width.  The plateau is measured over the middle half [T/4, 3T/4].
struct TurnpikeReport {
  double delta = 0.0;
  double t_entry = 0.0;
  ExpFit entry_fit;  ///< μ > 0 means the approach to the turnpike is exponential
  ExpFit exit_fit;   ///< rates of the departure layer near t = T
  double plateau_dy = 0.0;     ///< max of d_y over the middle half
  double plateau_total = 0.0;  ///< max of d_y + d_u over the middle half
  double cost_gap = 0.0;       ///< J_T(u) - T · J_s(ū)
  bool confirmed = false;      ///< μ_entry > 0 and the plateau sits below d_y(0)
  std::string note;
  DistanceCurves curves;
};

TurnpikeReport make_turnpike_report(const ProblemSpec& spec, const DiscretizationSpec& disc,
                                    const OptimizationResult& opt, const SteadyPair& steady,
                                    const TurnpikeOptions& opts = {});

/// One row of the horizon sweep.  `ok` is false when the optimizer diverged
/// or a solve failed for that horizon; such rows carry the reason in `note`
/// and are excluded from CSV output.
struct SweepRow {
  double T = 0.0;
  double JT = 0.0;         ///< attained J_T
  double JT_over_T = 0.0;  ///< J_T / T, converging to J_s when ω = Ω
  double Js = 0.0;         ///< steady optimal cost
  double gap = 0.0;        ///< J_T - T · J_s
  double yt_l2 = 0.0;      ///< ‖y_t‖_{L²((0,T)×Ω)}, bounded uniformly in T
  double ratio = 0.0;      ///< (‖u‖_∞ + ‖y‖_∞) / (‖y₀‖_∞ + ‖z‖_∞)
  bool ok = true;
  std::string note;
};

struct SweepTable {
  std::vector<SweepRow> rows;  ///< sorted by T
  /// True when ω = Ω on the grid, where J_T/T → J_s holds as an equality in
  /// the limit; otherwise T·J_s is only an upper-bound reference and the gap
  /// column must be read as an upper-bound check.
  bool averages_certified = false;
};

/// Optimizes J_T for each horizon in `horizons` with Δt and h fixed (nt
/// scales with T), against the one steady optimum shared by all rows.
/// `jobs` > 1 computes rows concurrently; the table is deterministic either
/// way.  Per-row failures flag the row and continue.
SweepTable averages_sweep(const ProblemSpec& spec, double dt_pol, int nx_pol,
                          const std::vector<double>& horizons,
                          const OptimizeOptions& opt_opts = {},
                          const SteadyOptions& steady_opts = {}, int jobs = 1);

/// The three-term rewriting of the cost of a trajectory, available when the
/// control acts on all of Ω: every snapshot Y_k is the steady state of
/// u_s(t_k) := -Δ_h Y_k + f(Y_k) by construction, so
///
///   J_T(u) = Δt Σ_k J_s(u_s(t_k)) + 1/2 ∫∫ y_t²
///          + 1/2 [ ‖y(T)‖²_{H¹₀} + 2∫F(y(T)) - ‖y₀‖²_{H¹₀} - 2∫F(y₀) ],
///
/// up to the O(Δt) defect of the time discretization.  `mismatch` is
/// |reconstructed - direct| / max(direct, 1).
/// Throws std::invalid_argument when ω does not cover every node.
struct CostDecomposition {
  double steady_term = 0.0;
  double kinetic_term = 0.0;
  double boundary_term = 0.0;
  double reconstructed = 0.0;
  double direct = 0.0;
  double mismatch = 0.0;
};

CostDecomposition representation_decomposition(const ProblemSpec& spec,
                                               const DiscretizationSpec& disc,
                                               const Control& u);

/// Two-phase suboptimal strategy built from the steady pair: feedback
/// u = ū - κ(y - ȳ) on ω until time tau, then hold ū.  Returns the realized
/// control and cost, plus the excess over `optimal_cost` when the caller
/// supplies the optimized J_T (NaN otherwise).
struct QuasiOptimalResult {
  Control control;
  CostBreakdown cost;
  double excess = 0.0;
};

QuasiOptimalResult quasi_optimal_strategy(const ProblemSpec& spec,
                                          const DiscretizationSpec& disc,
                                          const SteadyPair& steady, double tau,
                                          double kappa = 10.0,
                                          double optimal_cost =
                                              std::numeric_limits<double>::quiet_NaN());

}  // namespace turnpike
