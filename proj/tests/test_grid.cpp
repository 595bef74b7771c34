#include "doctest.h"

#include "turnpike/grid.hpp"

#include <cmath>
#include <stdexcept>

using namespace turnpike;

TEST_SUITE("grid") {

TEST_CASE("node placement and spacing") {
    Grid g = Grid::make(0.0, 1.0, 9);
    CHECK(g.h == doctest::Approx(0.1));
    CHECK(g.x(0) == doctest::Approx(0.1));
    CHECK(g.x(8) == doctest::Approx(0.9));

    Grid shifted = Grid::make(-2.0, 3.0, 4);
    CHECK(shifted.h == doctest::Approx(1.0));
    CHECK(shifted.x(0) == doctest::Approx(-1.0));
    CHECK(shifted.x(3) == doctest::Approx(2.0));

    CHECK_THROWS_AS(Grid::make(1.0, 0.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(Grid::make(0.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("sin(pi x) is an exact eigenvector of the discrete Laplacian") {
    Grid g = Grid::make(0.0, 1.0, 31);
    Field v(g.nx);
    for (int i = 0; i < g.nx; ++i) v[i] = std::sin(M_PI * g.x(i));

    Field lap(g.nx);
    lap = laplacian_apply(g, v);

    const double lam = (2.0 - 2.0 * std::cos(M_PI * g.h)) / (g.h * g.h);
    for (int i = 0; i < g.nx; ++i)
        CHECK(-lap[i] == doctest::Approx(lam * v[i]).epsilon(1e-12));

    CHECK(g.lambda_min() == doctest::Approx(lam).epsilon(1e-14));
}

TEST_CASE("lambda_min equals the Rayleigh quotient at the ground mode") {
    Grid g = Grid::make(-1.0, 2.0, 57);
    Field v(g.nx);
    for (int i = 0; i < g.nx; ++i)
        v[i] = std::sin(M_PI * (g.x(i) - g.a) / (g.b - g.a));
    Field lap(g.nx);
    lap = laplacian_apply(g, v);
    for (double& w : lap) w = -w;
    double rayleigh = inner_l2(g, v, lap) / (norm(g, v, NormKind::L2) * norm(g, v, NormKind::L2));
    CHECK(g.lambda_min() == doctest::Approx(rayleigh).epsilon(1e-12));
}

TEST_CASE("shifted solve against a hand-eliminated 2x2 system") {
    // nx = 2 on (0,1): h = 1/3, 1/h^2 = 9.  With sigma = 1 the matrix is
    //   [ 19  -9 ]         inverse = 1/280 [ 19  9 ]
    //   [ -9  19 ],                        [  9 19 ]
    Grid g = Grid::make(0.0, 1.0, 2);
    ShiftedLaplacian op(g, 1.0);
    Field r = {1.0, 2.0};
    Field v = op.solve(r);
    CHECK(v[0] == doctest::Approx(37.0 / 280.0).epsilon(1e-14));
    CHECK(v[1] == doctest::Approx(47.0 / 280.0).epsilon(1e-14));
}

TEST_CASE("shifted solve inverts (sigma - Laplacian) to machine precision") {
    Grid g = Grid::make(0.0, 2.0, 143);
    const double sigma = 37.5;
    ShiftedLaplacian op(g, sigma);

    Field r(g.nx);
    for (int i = 0; i < g.nx; ++i) r[i] = std::cos(7.0 * g.x(i)) + 0.1 * i;

    Field v(g.nx), lap(g.nx);
    op.solve(r, v);
    lap = laplacian_apply(g, v);
    for (int i = 0; i < g.nx; ++i)
        CHECK(sigma * v[i] - lap[i] == doctest::Approx(r[i]).epsilon(1e-11));

    // the factorization is reusable
    Field v2 = op.solve(r);
    for (int i = 0; i < g.nx; ++i) CHECK(v2[i] == v[i]);

    CHECK(solve_shifted_laplacian(g, sigma, r)[0] == doctest::Approx(v[0]));
}

TEST_CASE("norms against closed forms") {
    Grid g = Grid::make(0.0, 1.0, 99);
    Field one(g.nx, 1.0);
    CHECK(norm(g, one, NormKind::L2) == doctest::Approx(std::sqrt(g.h * g.nx)).epsilon(1e-14));
    CHECK(norm(g, one, NormKind::Linf) == doctest::Approx(1.0));

    Field v(g.nx);
    for (int i = 0; i < g.nx; ++i) v[i] = std::sin(M_PI * g.x(i));
    // discrete summation by parts: |v|_{H1}^2 = (v, -Lap v)_{L2}
    Field lap(g.nx);
    lap = laplacian_apply(g, v);
    for (double& w : lap) w = -w;
    double h10 = norm(g, v, NormKind::H10);
    CHECK(h10 * h10 == doctest::Approx(inner_l2(g, v, lap)).epsilon(1e-12));
    // and for the ground mode that is lambda_min |v|_{L2}^2
    double l2 = norm(g, v, NormKind::L2);
    CHECK(h10 == doctest::Approx(std::sqrt(g.lambda_min()) * l2).epsilon(1e-12));
}

TEST_CASE("interval masks are strict about endpoints") {
    Grid g = Grid::make(0.0, 1.0, 9);  // nodes 0.1 .. 0.9
    Mask m = interval_mask(g, 0.25, 0.55);
    CHECK(m.count == 3);  // 0.3, 0.4, 0.5
    CHECK(m.measure(g) == doctest::Approx(0.3));
    CHECK(!m.covers_all());
    CHECK(m.on[1] == 0);
    CHECK(m.on[2] == 1);
    CHECK(m.on[4] == 1);
    CHECK(m.on[5] == 0);

    Mask all = interval_mask(g, 0.0, 1.0);
    CHECK(all.covers_all());
    CHECK(all.count == g.nx);

    Mask none = interval_mask(g, 0.91, 0.99);
    CHECK(none.count == 0);
    CHECK(none.measure(g) == 0.0);
}

TEST_CASE("masked norms see only the masked nodes") {
    Grid g = Grid::make(0.0, 1.0, 9);
    Mask m = interval_mask(g, 0.25, 0.55);
    Field v(g.nx, 0.0);
    v[2] = 3.0;
    v[7] = 100.0;  // outside the mask
    CHECK(masked_linf(v, m) == doctest::Approx(3.0));
    CHECK(masked_l2(g, v, m) == doctest::Approx(std::sqrt(g.h * 9.0)));
}

} // TEST_SUITE
