#include "doctest.h"

#include "turnpike/steady.hpp"

#include <cmath>
#include <vector>

using namespace turnpike;

namespace {

ProblemSpec poisson_spec() {
    ProblemSpec s;
    s.domain = {0.0, 1.0};
    s.control_region = {0.0, 1.0};
    s.observation_region = {0.0, 1.0};
    s.beta = 1.0;
    s.horizon = 1.0;
    s.target = Profile::constant(0.0);
    s.initial = Profile::constant(0.0);
    s.f = Nonlinearity::zero();
    return s;
}

// Dense Gaussian elimination with partial pivoting; the independent solver
// for the small closed-form optimality systems below.
std::vector<double> dense_solve(std::vector<std::vector<double>> M, std::vector<double> b) {
    int n = static_cast<int>(b.size());
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(M[r][c]) > std::abs(M[piv][c])) piv = r;
        std::swap(M[c], M[piv]);
        std::swap(b[c], b[piv]);
        for (int r = c + 1; r < n; ++r) {
            double m = M[r][c] / M[c][c];
            for (int k = c; k < n; ++k) M[r][k] -= m * M[c][k];
            b[r] -= m * b[c];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int k = r + 1; k < n; ++k) s -= M[r][k] * x[k];
        x[r] = s / M[r][r];
    }
    return x;
}

std::vector<std::vector<double>> laplacian_matrix(const Grid& g) {
    std::vector<std::vector<double>> A(g.nx, std::vector<double>(g.nx, 0.0));
    double d = 2.0 / (g.h * g.h), o = -1.0 / (g.h * g.h);
    for (int i = 0; i < g.nx; ++i) {
        A[i][i] = d;
        if (i > 0) A[i][i - 1] = o;
        if (i + 1 < g.nx) A[i][i + 1] = o;
    }
    return A;
}

} // namespace

TEST_SUITE("steady") {

TEST_CASE("unit source solves to the exact parabola x(1-x)/2") {
    // -y'' = 1, y(0) = y(1) = 0 has solution x(1-x)/2, a quadratic — the
    // three-point stencil differentiates quadratics exactly, so the discrete
    // solution hits the nodes with no truncation error at all.
    auto spec = poisson_spec();
    Grid g = Grid::make(0.0, 1.0, 39);
    Field ones(g.nx, 1.0);
    Field y = solve_elliptic(spec, g, ones);
    for (int i = 0; i < g.nx; ++i) {
        double xi = g.x(i);
        CHECK(y[i] == doctest::Approx(xi * (1.0 - xi) / 2.0).epsilon(1e-13));
    }
}

TEST_CASE("Newton recovers a manufactured nonlinear steady state exactly") {
    auto spec = poisson_spec();
    spec.f = Nonlinearity::power(2.0, 3.0);
    Grid g = Grid::make(0.0, 1.0, 27);

    Field target(g.nx);
    for (int i = 0; i < g.nx; ++i) target[i] = 1.5 * std::sin(M_PI * g.x(i));

    // u := -Lap(target) + f(target), then the solver must return target
    Field lap(g.nx);
    lap = laplacian_apply(g, target);
    Field u(g.nx);
    for (int i = 0; i < g.nx; ++i) u[i] = -lap[i] + spec.f.f(target[i]);

    Field y = solve_elliptic(spec, g, u);
    for (int i = 0; i < g.nx; ++i)
        CHECK(y[i] == doctest::Approx(target[i]).epsilon(1e-11));

    // warm start from the answer terminates immediately at the answer
    Field warm = solve_elliptic(spec, g, u, &y);
    for (int i = 0; i < g.nx; ++i) CHECK(warm[i] == doctest::Approx(y[i]));
}

TEST_CASE("steady cost uses the h-weighted quadrature on both terms") {
    auto spec = poisson_spec();
    spec.beta = 2.0;
    Grid g = Grid::make(0.0, 1.0, 19);
    Field ones(g.nx, 1.0);

    Field y;
    CostBreakdown c = steady_cost(spec, g, ones, &y);
    double control = 0.5 * g.h * g.nx;  // 1/2 ∫ 1²  on the open node set
    double track = 0.0;
    for (int i = 0; i < g.nx; ++i) track += y[i] * y[i];
    track *= 0.5 * spec.beta * g.h;
    CHECK(c.control_term == doctest::Approx(control).epsilon(1e-14));
    CHECK(c.tracking_term == doctest::Approx(track).epsilon(1e-14));
    CHECK(c.total == doctest::Approx(control + track).epsilon(1e-14));

    // continuum reference: ∫ (x(1-x)/2)² = 1/120, matched to O(h²)
    CHECK(track / (0.5 * spec.beta) == doctest::Approx(1.0 / 120.0).epsilon(1e-3));

    CostBreakdown direct = steady_cost_at_state(spec, g, ones, y);
    CHECK(direct.total == doctest::Approx(c.total).epsilon(1e-14));
}

TEST_CASE("with beta = 0 the optimal steady control is zero") {
    auto spec = poisson_spec();
    spec.beta = 0.0;
    spec.f = Nonlinearity::power(1.0, 3.0);
    Grid g = Grid::make(0.0, 1.0, 20);
    SteadyPair p = solve_steady_optimum(spec, g);
    CHECK(p.converged);
    CHECK(p.cost.total == doctest::Approx(0.0).epsilon(1e-12));
    for (double v : p.control) CHECK(v == doctest::Approx(0.0).epsilon(1e-9));
    for (double v : p.state) CHECK(std::abs(v) < 1e-9);
}

TEST_CASE("linear full-control optimum matches the dense normal equations") {
    // With f = 0 and omega = omega0 = Omega the optimality system collapses
    // to (A² + beta I) ybar = beta z, ubar = A ybar, solved densely here.
    auto spec = poisson_spec();
    spec.beta = 50.0;
    spec.target = Profile::constant(1.0);
    Grid g = Grid::make(0.0, 1.0, 12);

    auto A = laplacian_matrix(g);
    int n = g.nx;
    std::vector<std::vector<double>> M(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += A[i][k] * A[k][j];
            M[i][j] = s + (i == j ? spec.beta : 0.0);
        }
    std::vector<double> rhs(n, spec.beta * 1.0);
    std::vector<double> ybar = dense_solve(M, rhs);
    std::vector<double> ubar(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ubar[i] += A[i][j] * ybar[j];

    SteadyOptions opts;
    opts.grad_tol = 1e-10;
    SteadyPair p = solve_steady_optimum(spec, g, opts);
    REQUIRE(p.converged);
    for (int i = 0; i < n; ++i) {
        CHECK(p.state[i] == doctest::Approx(ybar[i]).epsilon(1e-6));
        CHECK(p.control[i] == doctest::Approx(ubar[i]).epsilon(1e-6));
    }
    // and the first-order system holds: ubar = -qbar on omega
    for (int i = 0; i < n; ++i)
        CHECK(p.control[i] == doctest::Approx(-p.adjoint[i]).epsilon(1e-6));
}

TEST_CASE("optimal cost never exceeds the zero-control cost") {
    auto spec = poisson_spec();
    spec.beta = 1000.0;
    spec.target = Profile::constant(1.0);
    spec.control_region = {0.0, 0.5};
    spec.observation_region = {0.2, 0.9};
    spec.f = Nonlinearity::power(1.0, 3.0);
    Grid g = Grid::make(0.0, 1.0, 40);

    SteadyPair p = solve_steady_optimum(spec, g);
    CHECK(p.converged);

    Field zero(g.nx, 0.0);
    CostBreakdown at_zero = steady_cost(spec, g, zero);
    CHECK(p.cost.total <= at_zero.total + 1e-12);
    // hence 1/2 |u|² <= J_s(0) = beta/2 |z|²_{omega0}: control stays modest
    CHECK(p.cost.control_term <= at_zero.total + 1e-12);

    // control supported strictly inside omega
    Mask omega = interval_mask(g, spec.control_region.lo, spec.control_region.hi);
    for (int i = 0; i < g.nx; ++i)
        if (!omega.on[i]) CHECK(p.control[i] == 0.0);
}

TEST_CASE("optimality residual: near zero at the optimum, large off it") {
    auto spec = poisson_spec();
    spec.beta = 100.0;
    spec.target = Profile::constant(0.5);
    spec.f = Nonlinearity::power(1.0, 3.0);
    Grid g = Grid::make(0.0, 1.0, 25);

    SteadyOptions opts;
    opts.grad_tol = 1e-9;
    SteadyPair p = solve_steady_optimum(spec, g, opts);
    REQUIRE(p.converged);
    CHECK(steady_optimality_residual(spec, g, p) < 1e-6);

    SteadyPair off = p;
    for (double& v : off.control) v += 0.1;
    CHECK(steady_optimality_residual(spec, g, off) > 1e-3);
}

} // TEST_SUITE
