#include "turnpike/steady.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "turnpike/errors.hpp"

namespace turnpike {

namespace {

// Solves (-Δ_h + diag(d)) v = rhs for d ≥ 0, by Thomas elimination on the
// tridiagonal system with row i:  -1/h² , 2/h² + d_i , -1/h².  Diagonal
// dominance holds whenever d ≥ 0, which the monotonicity of f guarantees.
Field solve_diag_shifted(const Grid& g, const Field& d, const Field& rhs) {
  const int n = g.nx;
  const double inv_h2 = 1.0 / (g.h * g.h);
  const double off = -inv_h2;
  Field c(n), v(n);
  double piv = 2.0 * inv_h2 + d[0];
  c[0] = off / piv;
  v[0] = rhs[0] / piv;
  for (int i = 1; i < n; ++i) {
    piv = 2.0 * inv_h2 + d[i] - off * c[i - 1];
    c[i] = off / piv;
    v[i] = (rhs[i] - off * v[i - 1]) / piv;
  }
  for (int i = n - 2; i >= 0; --i) v[i] -= c[i] * v[i + 1];
  return v;
}

struct SteadyContext {
  Grid g;
  Mask omega, omega0;
  Field z;
};

SteadyContext make_context(const ProblemSpec& spec, const Grid& g) {
  SteadyContext c;
  c.g = g;
  c.omega = interval_mask(g, spec.control_region.lo, spec.control_region.hi);
  c.omega0 = interval_mask(g, spec.observation_region.lo, spec.observation_region.hi);
  c.z = sample(g, spec.target);
  return c;
}

// Residual G(y) = -Δ_h y + f(y) - u_s χ_ω of the steady state equation.
Field state_residual(const ProblemSpec& spec, const SteadyContext& ctx,
                     const Field& y, const Field& u_s) {
  Field r = laplacian_apply(ctx.g, y);
  for (int i = 0; i < ctx.g.nx; ++i) {
    double forced = ctx.omega.on[i] ? u_s[i] : 0.0;
    r[i] = -r[i] + spec.f.f(y[i]) - forced;
  }
  return r;
}

}  // namespace

Field solve_elliptic(const ProblemSpec& spec, const Grid& g, const Field& u_s,
                     const Field* initial_guess, double tol) {
  if (static_cast<int>(u_s.size()) != g.nx)
    throw std::invalid_argument("solve_elliptic: control size does not match grid");
  SteadyContext ctx = make_context(spec, g);

  Field y = initial_guess ? *initial_guess : Field(g.nx, 0.0);
  if (static_cast<int>(y.size()) != g.nx)
    throw std::invalid_argument("solve_elliptic: initial guess size does not match grid");

  Field res = state_residual(spec, ctx, y, u_s);
  double rn = norm(g, res, NormKind::L2);

  const int max_newton = 50;
  for (int it = 0; it < max_newton; ++it) {
    if (rn <= tol) return y;

    Field dprime(g.nx);
    for (int i = 0; i < g.nx; ++i) dprime[i] = spec.f.df(y[i]);
    for (double& v : res) v = -v;
    Field delta = solve_diag_shifted(g, dprime, res);

    // Damping: halve until the residual actually decreases.  For monotone f
    // the full step is usually accepted; the guard only trips on extreme
    // data, where Newton from a poor iterate overshoots.
    double alpha = 1.0;
    Field trial(g.nx);
    for (;;) {
      for (int i = 0; i < g.nx; ++i) trial[i] = y[i] + alpha * delta[i];
      Field trial_res = state_residual(spec, ctx, trial, u_s);
      double trial_rn = norm(g, trial_res, NormKind::L2);
      if (std::isfinite(trial_rn) && trial_rn < rn) {
        y.swap(trial);
        res.swap(trial_res);
        rn = trial_rn;
        break;
      }
      alpha *= 0.5;
      if (alpha < 1e-12)
        throw SolveError(SolveError::Kind::NewtonStall,
                         "steady solve: damping exhausted at iteration " +
                             std::to_string(it) + " (residual " + std::to_string(rn) + ")",
                         it, 0.0);
    }
  }
  if (rn <= tol) return y;
  throw SolveError(SolveError::Kind::NewtonStall,
                   "steady solve: no convergence after " + std::to_string(max_newton) +
                       " iterations (residual " + std::to_string(rn) + ")",
                   max_newton, 0.0);
}

CostBreakdown steady_cost_at_state(const ProblemSpec& spec, const Grid& g,
                                   const Field& u_s, const Field& y) {
  SteadyContext ctx = make_context(spec, g);
  CostBreakdown out;
  double uc = 0.0, tc = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    if (ctx.omega.on[i]) uc += u_s[i] * u_s[i];
    if (ctx.omega0.on[i]) {
      double d = y[i] - ctx.z[i];
      tc += d * d;
    }
  }
  out.control_term = 0.5 * g.h * uc;
  out.tracking_term = 0.5 * spec.beta * g.h * tc;
  out.total = out.control_term + out.tracking_term;
  return out;
}

CostBreakdown steady_cost(const ProblemSpec& spec, const Grid& g, const Field& u_s,
                          Field* state_out) {
  Field y = solve_elliptic(spec, g, u_s, state_out && !state_out->empty() ? state_out : nullptr);
  CostBreakdown out = steady_cost_at_state(spec, g, u_s, y);
  if (state_out) *state_out = std::move(y);
  return out;
}

SteadyPair solve_steady_optimum(const ProblemSpec& spec, const Grid& g,
                                const SteadyOptions& opts) {
  SteadyContext ctx = make_context(spec, g);

  SteadyPair best;
  Field u(g.nx, 0.0);
  Field y = solve_elliptic(spec, g, u);
  CostBreakdown cost = steady_cost_at_state(spec, g, u, y);

  auto compute_adjoint = [&](const Field& state) {
    Field dprime(g.nx), rhs(g.nx);
    for (int i = 0; i < g.nx; ++i) {
      dprime[i] = spec.f.df(state[i]);
      rhs[i] = ctx.omega0.on[i] ? spec.beta * (state[i] - ctx.z[i]) : 0.0;
    }
    return solve_diag_shifted(g, dprime, rhs);
  };

  double step = opts.initial_step;
  int it = 0;
  Field q, grad(g.nx), trial_u(g.nx), trial_y;
  double gn = 0.0;
  bool converged = false;

  // The iteration has two regimes.  Away from the optimum, Armijo
  // backtracking on the cost.  Near it, the attainable decrease is
  // O(‖grad‖²) and falls below the resolution of the cost in double
  // precision long before ‖grad‖ reaches a tight tolerance; from that point
  // on (one-way switch) the line search descends on ‖grad‖ itself, which
  // comes from fresh PDE solves and stays accurate at every scale.
  bool endgame = false;

  for (; it < opts.max_iters; ++it) {
    q = compute_adjoint(y);
    double gsq = 0.0;
    for (int i = 0; i < g.nx; ++i) {
      grad[i] = ctx.omega.on[i] ? u[i] + q[i] : 0.0;
      gsq += grad[i] * grad[i];
    }
    gsq *= g.h;
    gn = std::sqrt(gsq);
    if (gn <= opts.grad_tol) {
      converged = true;
      break;
    }

    const double cost_ulp =
        4.0 * std::numeric_limits<double>::epsilon() * std::fabs(cost.total);
    if (!endgame && opts.armijo_c * (2.0 * step) * gsq < cost_ulp) endgame = true;

    // The previous accepted step, doubled, seeds either search, so the
    // effective step adapts in both directions without a tuning knob.
    double s = step * 2.0;
    bool accepted = false;

    if (!endgame) {
      for (int bt = 0; bt < 60 && !accepted; ++bt, s *= 0.5) {
        for (int i = 0; i < g.nx; ++i) trial_u[i] = u[i] - s * grad[i];
        trial_y = y;  // warm start
        CostBreakdown trial_cost;
        bool solvable = true;
        try {
          Field ty = solve_elliptic(spec, g, trial_u, &trial_y);
          trial_cost = steady_cost_at_state(spec, g, trial_u, ty);
          trial_y = std::move(ty);
        } catch (const SolveError&) {
          solvable = false;  // treat like a failed Armijo probe: shrink
        }
        // Demand a decrease that is resolvable in double precision, or
        // bit-equal costs would count as progress and freeze the step at a
        // noise-level value.
        double needed = std::max(opts.armijo_c * s * gsq, cost_ulp);
        if (solvable && trial_cost.total <= cost.total - needed) {
          u.swap(trial_u);
          y = std::move(trial_y);
          cost = trial_cost;
          step = s;
          accepted = true;
        }
      }
      if (!accepted) endgame = true;  // cost exhausted: finish on the gradient
    }

    if (endgame && !accepted) {
      s = step * 2.0;
      for (int bt = 0; bt < 60 && !accepted; ++bt, s *= 0.5) {
        for (int i = 0; i < g.nx; ++i) trial_u[i] = u[i] - s * grad[i];
        trial_y = y;
        Field ty;
        try {
          ty = solve_elliptic(spec, g, trial_u, &trial_y);
        } catch (const SolveError&) {
          continue;
        }
        Field tq = compute_adjoint(ty);
        double tgsq = 0.0;
        for (int i = 0; i < g.nx; ++i) {
          if (!ctx.omega.on[i]) continue;
          double gi = trial_u[i] + tq[i];
          tgsq += gi * gi;
        }
        if (std::sqrt(g.h * tgsq) < gn) {
          u.swap(trial_u);
          y = std::move(ty);
          cost = steady_cost_at_state(spec, g, u, y);
          step = s;
          accepted = true;
        }
      }
    }
    if (!accepted) break;  // no descent in either metric: return best, flagged
  }

  best.control = std::move(u);
  best.state = std::move(y);
  best.adjoint = compute_adjoint(best.state);
  best.cost = cost;
  best.grad_norm = gn;
  best.iterations = it;
  best.converged = converged;
  return best;
}

double steady_optimality_residual(const ProblemSpec& spec, const Grid& g,
                                  const SteadyPair& pair) {
  SteadyContext ctx = make_context(spec, g);
  const Field& y = pair.state;
  const Field& u = pair.control;
  const Field& q = pair.adjoint;
  if (static_cast<int>(y.size()) != g.nx || u.size() != y.size() || q.size() != y.size())
    throw std::invalid_argument("steady_optimality_residual: field sizes do not match grid");

  Field lap_y = laplacian_apply(g, y);
  Field lap_q = laplacian_apply(g, q);
  double s_state = 0.0, s_adj = 0.0, s_grad = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    double forced = ctx.omega.on[i] ? u[i] : 0.0;
    double r1 = -lap_y[i] + spec.f.f(y[i]) - forced;
    double track = ctx.omega0.on[i] ? spec.beta * (y[i] - ctx.z[i]) : 0.0;
    double r2 = -lap_q[i] + spec.f.df(y[i]) * q[i] - track;
    s_state += r1 * r1;
    s_adj += r2 * r2;
    if (ctx.omega.on[i]) {
      double r3 = u[i] + q[i];
      s_grad += r3 * r3;
    }
  }
  double h = g.h;
  double r_state = std::sqrt(h * s_state);
  double r_adj = std::sqrt(h * s_adj);
  double r_grad = std::sqrt(h * s_grad);
  return std::max(r_state, std::max(r_adj, r_grad));
}

}  // namespace turnpike
