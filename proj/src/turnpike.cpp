#include "turnpike/turnpike.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "turnpike/errors.hpp"

namespace turnpike {

DistanceCurves distance_curves(const Grid& g, const Mask& omega,
                               const OptimizationResult& opt, const SteadyPair& steady) {
  if (static_cast<int>(steady.state.size()) != g.nx)
    throw std::invalid_argument("distance_curves: steady pair does not match grid");

  DistanceCurves out;
  out.dt = opt.state.dt;
  out.d_y.reserve(opt.state.states.size());
  for (const Field& yk : opt.state.states) {
    double m = 0.0;
    for (int j = 0; j < g.nx; ++j) m = std::max(m, std::fabs(yk[j] - steady.state[j]));
    out.d_y.push_back(m);
  }
  out.d_u.reserve(opt.control.steps.size());
  for (const Field& uk : opt.control.steps) {
    double m = 0.0;
    for (int j = 0; j < g.nx; ++j)
      if (omega.on[j]) m = std::max(m, std::fabs(uk[j] - steady.control[j]));
    out.d_u.push_back(m);
  }
  return out;
}

namespace {

// The exponential model describes the approach to the turnpike, not the
// resolution-limited floor the series lands on afterwards (set by optimizer
// tolerance and round-off).  Samples taken after the series has sunk to
// within a small factor of that floor carry no rate information and only
// bend a log-linear fit, so the fit window ends at the saturation onset.
// A series with less than a decade of decay keeps the full window: there is
// no layer to cut and the flat fit (mu near 0) is the honest answer.
double saturation_cutoff(const std::vector<double>& t, const std::vector<double>& d,
                         double t_lo, double t_hi) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi) continue;
    lo = std::min(lo, d[i]);
    hi = std::max(hi, d[i]);
  }
  if (!(hi > 10.0 * lo)) return t_hi;
  const double cut = 3.0 * lo;
  int kept = 0;
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi) continue;
    if (d[i] <= cut) return kept >= 3 ? t[i] : t_hi;
    ++kept;
  }
  return t_hi;
}

}  // namespace

double entry_time(const Trajectory& y, double delta) {
  for (size_t k = 0; k < y.states.size(); ++k) {
    double m = 0.0;
    for (double v : y.states[k]) m = std::max(m, std::fabs(v));
    if (m <= delta) return y.time(static_cast<int>(k));
  }
  return y.time(y.nt());
}

ExpFit fit_exponential_rates(const std::vector<double>& t, const std::vector<double>& d,
                             double t_lo, double t_hi) {
  if (t.size() != d.size())
    throw std::invalid_argument("fit_exponential_rates: mismatched sample vectors");

  // Least squares for ln d = c - μ t over the window, clipping the values
  // that would send ln to -inf.
  const double floor_value = 1e-14;
  double st = 0, sy = 0, stt = 0, sty = 0;
  int n = 0, clipped = 0;
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi) continue;
    double v = d[i];
    if (v < floor_value) {
      v = floor_value;
      ++clipped;
    }
    double ly = std::log(v);
    st += t[i];
    sy += ly;
    stt += t[i] * t[i];
    sty += t[i] * ly;
    ++n;
  }
  if (n < 3)
    throw std::invalid_argument("fit_exponential_rates: window holds " +
                                std::to_string(n) + " samples, need at least 3");

  double denom = n * stt - st * st;
  if (denom <= 0.0)
    throw std::invalid_argument("fit_exponential_rates: degenerate window (all samples at one time)");
  double slope = (n * sty - st * sy) / denom;
  double intercept = (sy - slope * st) / n;

  ExpFit fit;
  fit.K = std::exp(intercept);
  fit.mu = -slope;
  fit.samples = n;
  fit.clipped = clipped;

  double ss = 0.0;
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi) continue;
    double v = std::max(d[i], floor_value);
    double e = std::log(v) - (intercept + slope * t[i]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

TurnpikeReport make_turnpike_report(const ProblemSpec& spec, const DiscretizationSpec& disc,
                                    const OptimizationResult& opt, const SteadyPair& steady,
                                    const TurnpikeOptions& opts) {
  DiscreteProblem dp = DiscreteProblem::make(spec, disc);
  const Grid& g = dp.grid;
  const double T = spec.horizon;

  TurnpikeReport rep;
  rep.curves = distance_curves(g, dp.omega, opt, steady);

  double ybar_inf = norm(g, steady.state, NormKind::Linf);
  double y0_inf = norm(g, dp.y0, NormKind::Linf);
  rep.delta = opts.delta > 0.0 ? opts.delta : 1.1 * ybar_inf + 0.05 * y0_inf;
  rep.t_entry = entry_time(opt.state, rep.delta);

  // Combined sup-distance d_y + d_u, sampled where both are defined (the
  // control is left-anchored, so that is the stamps t_0 .. t_{nt-1}).
  const int nt = dp.nt;
  std::vector<double> stamps(nt), combined(nt);
  for (int k = 0; k < nt; ++k) {
    stamps[k] = k * dp.dt;
    combined[k] = rep.curves.d_y[k] + rep.curves.d_u[k];
  }

  const double window = std::min(T / 4.0, 2.0);
  double entry_hi = saturation_cutoff(stamps, combined, rep.t_entry, rep.t_entry + window);
  rep.entry_fit = fit_exponential_rates(stamps, combined, rep.t_entry, entry_hi);

  // Exit layer: reverse time, so the fitted μ is the rate at which the
  // departure from the turnpike grows toward t = T.
  std::vector<double> rev_stamps(nt), rev_combined(nt);
  for (int k = 0; k < nt; ++k) {
    rev_stamps[k] = T - stamps[nt - 1 - k];
    rev_combined[k] = combined[nt - 1 - k];
  }
  double exit_hi = saturation_cutoff(rev_stamps, rev_combined, 0.0, window);
  rep.exit_fit = fit_exponential_rates(rev_stamps, rev_combined, 0.0, exit_hi);

  double pd = 0.0, pt = 0.0;
  for (int k = 0; k <= nt; ++k) {
    double tk = k * dp.dt;
    if (tk < T / 4.0 || tk > 3.0 * T / 4.0) continue;
    pd = std::max(pd, rep.curves.d_y[k]);
    if (k < nt) pt = std::max(pt, rep.curves.d_y[k] + rep.curves.d_u[k]);
  }
  rep.plateau_dy = pd;
  rep.plateau_total = pt;

  rep.cost_gap = opt.cost.total - T * steady.cost.total;

  double d0 = rep.curves.d_y.front();
  rep.confirmed = rep.entry_fit.mu > 0.0 && rep.plateau_dy < d0;
  if (rep.confirmed) {
    rep.note = "exponential entry (mu = " + std::to_string(rep.entry_fit.mu) +
               "), plateau well below the initial distance";
  } else if (!(rep.entry_fit.mu > 0.0)) {
    rep.note = "no exponential approach detected (mu_entry <= 0)";
  } else {
    rep.note = "plateau does not separate from the initial distance";
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Horizon sweep
// ---------------------------------------------------------------------------

SweepTable averages_sweep(const ProblemSpec& spec, double dt_pol, int nx_pol,
                          const std::vector<double>& horizons,
                          const OptimizeOptions& opt_opts,
                          const SteadyOptions& steady_opts, int jobs) {
  if (!(dt_pol > 0.0)) throw std::invalid_argument("averages_sweep: dt must be > 0");
  if (horizons.empty()) throw std::invalid_argument("averages_sweep: no horizons given");

  std::vector<double> Ts = horizons;
  std::sort(Ts.begin(), Ts.end());

  Grid g = Grid::make(spec.domain.lo, spec.domain.hi, nx_pol);
  Mask omega = interval_mask(g, spec.control_region.lo, spec.control_region.hi);

  // The steady problem does not involve the horizon: one solve serves every
  // row.
  SteadyPair steady = solve_steady_optimum(spec, g, steady_opts);

  Field y0s = sample(g, spec.initial);
  Field zs = sample(g, spec.target);
  double data_scale = norm(g, y0s, NormKind::Linf) + norm(g, zs, NormKind::Linf);

  SweepTable table;
  table.averages_certified = omega.covers_all();
  table.rows.resize(Ts.size());

  auto run_row = [&](size_t idx) {
    SweepRow& row = table.rows[idx];
    row.T = Ts[idx];
    row.Js = steady.cost.total;
    try {
      ProblemSpec rs = spec;
      rs.horizon = row.T;
      DiscretizationSpec disc;
      disc.nx = nx_pol;
      disc.nt = std::max(1, static_cast<int>(std::lround(row.T / dt_pol)));
      Control u0 = Control::zeros(disc.nt, nx_pol, rs.horizon / disc.nt);
      OptimizationResult opt = gradient_descent(rs, disc, u0, opt_opts);
      if (opt.reason == OptimizationResult::Reason::Diverged) {
        row.ok = false;
        row.note = "optimizer diverged (restarts exhausted)";
        return;
      }
      row.JT = opt.cost.total;
      row.JT_over_T = opt.cost.total / row.T;
      row.gap = opt.cost.total - row.T * steady.cost.total;
      row.yt_l2 = opt.state.time_derivative_l2(g);
      double sup = opt.control.space_time_linf() + opt.state.space_time_linf();
      row.ratio = sup / data_scale;
      if (opt.reason == OptimizationResult::Reason::MaxIters)
        row.note = "max_iters reached (grad_norm " + std::to_string(opt.final_grad_norm) + ")";
    } catch (const SolveError& e) {
      row.ok = false;
      row.note = e.what();
    }
  };

  int workers = std::max(1, std::min<int>(jobs, static_cast<int>(Ts.size())));
  if (workers == 1) {
    for (size_t i = 0; i < Ts.size(); ++i) run_row(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          size_t i = next.fetch_add(1);
          if (i >= Ts.size()) return;
          run_row(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  return table;
}

// ---------------------------------------------------------------------------
// Cost decomposition and the quasi-optimal strategy
// ---------------------------------------------------------------------------

CostDecomposition representation_decomposition(const ProblemSpec& spec,
                                               const DiscretizationSpec& disc,
                                               const Control& u) {
  DiscreteProblem dp = DiscreteProblem::make(spec, disc);
  if (!dp.omega.covers_all())
    throw std::invalid_argument(
        "representation_decomposition: requires the control region to cover "
        "every grid node (ω = Ω)");
  const Grid& g = dp.grid;

  Trajectory y;
  solve_forward_into(dp, u, y);

  CostDecomposition out;

  // Direct cost (same quadrature as evaluate_cost).
  {
    double uc = 0.0;
    for (const Field& step : u.steps)
      for (double v : step) uc += v * v;
    double tc = 0.0;
    for (int k = 1; k <= dp.nt; ++k)
      for (int j = 0; j < g.nx; ++j) {
        if (!dp.omega0.on[j]) continue;
        double d = y.states[k][j] - dp.z[j];
        tc += d * d;
      }
    out.direct = 0.5 * dp.dt * g.h * uc + 0.5 * dp.beta * dp.dt * g.h * tc;
  }

  // Term 1: the steady cost of the instantaneous control -Δ_h Y_k + f(Y_k),
  // whose steady state is Y_k itself — no elliptic solve involved.
  double steady_term = 0.0;
  for (int k = 1; k <= dp.nt; ++k) {
    const Field& yk = y.states[k];
    Field lap = laplacian_apply(g, yk);
    double uc = 0.0, tc = 0.0;
    for (int j = 0; j < g.nx; ++j) {
      double us = -lap[j] + dp.f.f(yk[j]);
      uc += us * us;
      if (dp.omega0.on[j]) {
        double d = yk[j] - dp.z[j];
        tc += d * d;
      }
    }
    steady_term += 0.5 * g.h * uc + 0.5 * dp.beta * g.h * tc;
  }
  out.steady_term = dp.dt * steady_term;

  // Term 2: kinetic part 1/2 ∫∫ y_t².
  double kin = 0.0;
  for (int i = 0; i < dp.nt; ++i)
    for (int j = 0; j < g.nx; ++j) {
      double d = (y.states[i + 1][j] - y.states[i][j]) / dp.dt;
      kin += d * d;
    }
  out.kinetic_term = 0.5 * dp.dt * g.h * kin;

  // Term 3: stored-energy difference between the endpoints.
  auto stored = [&](const Field& v) {
    double grad = norm(g, v, NormKind::H10);
    double pot = 0.0;
    for (double vj : v) pot += dp.f.F(vj);
    return grad * grad + 2.0 * g.h * pot;
  };
  out.boundary_term = 0.5 * (stored(y.states[dp.nt]) - stored(y.states[0]));

  out.reconstructed = out.steady_term + out.kinetic_term + out.boundary_term;
  out.mismatch = std::fabs(out.reconstructed - out.direct) / std::max(out.direct, 1.0);
  return out;
}

QuasiOptimalResult quasi_optimal_strategy(const ProblemSpec& spec,
                                          const DiscretizationSpec& disc,
                                          const SteadyPair& steady, double tau,
                                          double kappa, double optimal_cost) {
  DiscreteProblem dp = DiscreteProblem::make(spec, disc);
  const Grid& g = dp.grid;
  if (static_cast<int>(steady.state.size()) != g.nx)
    throw std::invalid_argument("quasi_optimal_strategy: steady pair does not match grid");
  if (!(tau >= 0.0 && tau <= spec.horizon))
    throw std::invalid_argument("quasi_optimal_strategy: tau must lie in [0, T]");

  // Phase 1 is a state feedback, so the control has to be built while
  // marching: u_i = ū - κ(Y_i - ȳ) on ω for t_i < tau, then ū.
  QuasiOptimalResult out;
  out.control = Control::zeros(dp.nt, g.nx, dp.dt);
  ShiftedLaplacian stepper(g, 1.0 / dp.dt);

  Field y = dp.y0;
  Field rhs(g.nx), ynext(g.nx);
  double uc = 0.0, tc = 0.0;
  for (int i = 0; i < dp.nt; ++i) {
    Field& ui = out.control.steps[i];
    bool feedback = (i * dp.dt) < tau;
    for (int j = 0; j < g.nx; ++j) {
      if (!dp.omega.on[j]) continue;
      ui[j] = feedback ? steady.control[j] - kappa * (y[j] - steady.state[j])
                       : steady.control[j];
      uc += ui[j] * ui[j];
    }
    for (int j = 0; j < g.nx; ++j) rhs[j] = y[j] / dp.dt - dp.f.f(y[j]) + ui[j];
    stepper.solve(rhs, ynext);
    double probe = 0.0;
    for (double v : ynext) probe += v;
    if (!std::isfinite(probe))
      throw SolveError(SolveError::Kind::BlowUp,
                       "quasi-optimal strategy: state blew up at step " + std::to_string(i + 1),
                       i + 1, (i + 1) * dp.dt);
    y.swap(ynext);
    for (int j = 0; j < g.nx; ++j) {
      if (!dp.omega0.on[j]) continue;
      double d = y[j] - dp.z[j];
      tc += d * d;
    }
  }

  out.cost.control_term = 0.5 * dp.dt * g.h * uc;
  out.cost.tracking_term = 0.5 * dp.beta * dp.dt * g.h * tc;
  out.cost.total = out.cost.control_term + out.cost.tracking_term;
  out.excess = out.cost.total - optimal_cost;
  return out;
}

}  // namespace turnpike
