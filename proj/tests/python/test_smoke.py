"""End-to-end smoke tests of the Python bindings on tiny instances."""

import math

import pytest

import turnpike_lab as tl


def small_spec():
    spec = tl.ProblemSpec()
    spec.domain = tl.Interval(0.0, 1.0)
    spec.control_region = tl.Interval(0.0, 1.0)
    spec.observation_region = tl.Interval(0.0, 1.0)
    spec.beta = 25.0
    spec.horizon = 0.5
    spec.target = tl.Profile.expression("sin(pi*x)")
    spec.initial = tl.Profile.constant(0.0)
    spec.f = tl.Nonlinearity.zero()
    return spec


def test_profile_and_nonlinearity():
    p = tl.Profile.expression("2*sin(pi*x)")
    assert p(0.5) == pytest.approx(2.0)
    assert p.text == "2*sin(pi*x)"
    f = tl.Nonlinearity.power(1.0, 3.0)
    assert f.f(2.0) == pytest.approx(8.0)
    assert f.df(2.0) == pytest.approx(12.0)
    assert f.F(2.0) == pytest.approx(4.0)


def test_grid_and_norms():
    g = tl.Grid.make(0.0, 1.0, 99)
    assert g.h == pytest.approx(0.01)
    xs = g.nodes()
    assert len(xs) == 99
    assert xs[0] == pytest.approx(0.01)
    v = [math.sin(math.pi * x) for x in xs]
    # ||sin(pi x)||_{L2(0,1)} = sqrt(1/2); the grid rule is exact for this mode
    assert tl.norm(g, v, tl.NormKind.L2) == pytest.approx(math.sqrt(0.5), rel=1e-12)
    lap = tl.laplacian_apply(g, v)
    lam = g.lambda_min()
    for lv, vv in zip(lap, v):
        assert lv == pytest.approx(-lam * vv, abs=1e-9)


def test_forward_solve_decays():
    spec = small_spec()
    spec.initial = tl.Profile.expression("sin(pi*x)")
    spec.beta = 0.0
    disc = tl.DiscretizationSpec(nx=50, nt=200)
    u = tl.Control.zeros(disc.nt, disc.nx, disc.dt(spec))
    y = tl.solve_forward(spec, disc, u)
    assert y.nt() == 200
    first = max(abs(v) for v in y.state(0))
    last = max(abs(v) for v in y.state(200))
    assert first == pytest.approx(1.0, abs=1e-3)
    assert last < first * math.exp(-0.5 * math.pi**2 * 0.9)


def test_blowup_raises_solve_error():
    spec = small_spec()
    spec.initial = tl.Profile.constant(10.0)
    spec.f = tl.Nonlinearity.power(1.0, 3.0)
    spec.horizon = 1.0
    disc = tl.DiscretizationSpec(nx=20, nt=10)
    u = tl.Control.zeros(disc.nt, disc.nx, disc.dt(spec))
    with pytest.raises(tl.SolveError, match="dt"):
        tl.solve_forward(spec, disc, u)


def test_gradient_matches_finite_differences():
    spec = small_spec()
    spec.f = tl.Nonlinearity.power(1.0, 3.0)
    spec.initial = tl.Profile.constant(1.0)
    disc = tl.DiscretizationSpec(nx=12, nt=15)
    dt = disc.dt(spec)
    u = tl.Control.zeros(disc.nt, disc.nx, dt)
    u.set_step(3, [0.5] * disc.nx)
    g = tl.gradient(spec, disc, u)
    grid = tl.make_grid(spec, disc)

    # smooth direction so the pairing is O(1), not a cancellation of signs
    direction = [
        [math.sin(math.pi * (j + 1) / (disc.nx + 1)) * (1 + i / disc.nt)
         for j in range(disc.nx)]
        for i in range(disc.nt)
    ]
    pairing = dt * grid.h * sum(
        gv * dv
        for gs, ds in zip(g.steps, direction)
        for gv, dv in zip(gs, ds)
    )
    eps = 1e-6
    up = tl.Control.zeros(disc.nt, disc.nx, dt)
    dn = tl.Control.zeros(disc.nt, disc.nx, dt)
    up.steps = [[uv + eps * dv for uv, dv in zip(us, ds)] for us, ds in zip(u.steps, direction)]
    dn.steps = [[uv - eps * dv for uv, dv in zip(us, ds)] for us, ds in zip(u.steps, direction)]
    fd = (tl.evaluate_cost(spec, disc, up).total - tl.evaluate_cost(spec, disc, dn).total) / (2 * eps)
    assert pairing == pytest.approx(fd, rel=1e-6)


def test_optimize_and_turnpike_report():
    spec = small_spec()
    spec.horizon = 2.0
    spec.initial = tl.Profile.expression("3*sin(pi*x)")
    disc = tl.DiscretizationSpec(nx=25, nt=200)
    grid = tl.make_grid(spec, disc)

    steady = tl.solve_steady_optimum(spec, grid)
    assert steady.converged
    assert tl.steady_optimality_residual(spec, grid, steady) < 1e-5

    opts = tl.OptimizeOptions()
    opts.stepsize = 0.2
    opts.grad_tol = 1e-7
    opts.max_iters = 5000
    u0 = tl.Control.zeros(disc.nt, disc.nx, disc.dt(spec))
    opt = tl.gradient_descent(spec, disc, u0, opts)
    assert opt.reason == tl.OptimizationResult.Reason.GradTol
    assert opt.cost.total <= opt.cost_history[0]

    report = tl.make_turnpike_report(spec, disc, opt, steady)
    assert report.confirmed
    assert report.entry_fit.mu > 0
    assert report.plateau_dy < 0.1 * report.curves.d_y[0]

    quasi = tl.quasi_optimal_strategy(spec, disc, steady, tau=0.5,
                                      optimal_cost=opt.cost.total)
    assert quasi.cost.total >= opt.cost.total * (1 - 1e-9)
    assert quasi.excess == pytest.approx(quasi.cost.total - opt.cost.total)


def test_config_round_trip():
    cfg = tl.parse_config_text("problem.beta = 7\ndisc.nx = 30\ndisc.nt = 40\n")
    assert cfg.problem.beta == 7.0
    assert cfg.disc.nx == 30
    d = cfg.to_dict()
    assert d["problem"]["beta"] == 7.0
    with pytest.raises(tl.ConfigError, match="bogus"):
        tl.parse_config_text("bogus.key = 1\n")


def test_expfit_recovers_rates():
    t = [0.05 * k for k in range(80)]
    d = [2.5 * math.exp(-1.25 * tk) for tk in t]
    fit = tl.fit_exponential_rates(t, d, 0.0, 4.0)
    assert fit.K == pytest.approx(2.5, rel=1e-9)
    assert fit.mu == pytest.approx(1.25, rel=1e-9)
