"""Optimal control of the semilinear heat equation, with turnpike diagnostics.

Thin Python layer over the C++ core.  The usual workflow:

    import turnpike_lab as tl

    cfg = tl.parse_config_file("configs/default.toml")
    grid = tl.make_grid(cfg.problem, cfg.disc)
    steady = tl.solve_steady_optimum(cfg.problem, grid, cfg.steady)
    u0 = tl.Control.zeros(cfg.disc.nt, cfg.disc.nx, cfg.disc.dt(cfg.problem))
    opt = tl.gradient_descent(cfg.problem, cfg.disc, u0, cfg.optimizer)
    report = tl.make_turnpike_report(cfg.problem, cfg.disc, opt, steady)

Fields cross the boundary as plain lists; wrap them in numpy arrays as needed.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
