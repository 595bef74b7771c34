#include "doctest.h"

#include "turnpike/nonlinearity.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using turnpike::Nonlinearity;

TEST_SUITE("nonlinearity") {

TEST_CASE("cubic power law") {
    Nonlinearity f = Nonlinearity::power(1.0, 3.0);
    CHECK(f.f(2.0) == doctest::Approx(8.0));
    CHECK(f.f(-2.0) == doctest::Approx(-8.0));  // odd extension
    CHECK(f.df(2.0) == doctest::Approx(12.0));
    CHECK(f.df(-2.0) == doctest::Approx(12.0));
    CHECK(f.F(2.0) == doctest::Approx(4.0));    // y^4/4
    CHECK(f.F(-2.0) == doctest::Approx(4.0));
    CHECK(f.f(0.0) == 0.0);
    CHECK(f.is_power());
    CHECK(f.power_exponent() == doctest::Approx(3.0));
}

TEST_CASE("non-integer exponent uses sign|y|^p") {
    Nonlinearity f = Nonlinearity::power(2.0, 1.5);
    CHECK(f.f(4.0) == doctest::Approx(16.0));
    CHECK(f.f(-4.0) == doctest::Approx(-16.0));
    CHECK(f.df(4.0) == doctest::Approx(2.0 * 1.5 * 2.0));
    CHECK(f.F(4.0) == doctest::Approx(2.0 * std::pow(4.0, 2.5) / 2.5));
}

TEST_CASE("zero nonlinearity makes the equation linear") {
    Nonlinearity f = Nonlinearity::zero();
    CHECK(f.f(17.0) == 0.0);
    CHECK(f.df(17.0) == 0.0);
    CHECK(f.F(17.0) == 0.0);
}

TEST_CASE("power-law consistency between f, df and F") {
    Nonlinearity f = Nonlinearity::power(0.7, 5.0);
    const double eps = 1e-6;
    for (double y : {-2.0, -0.3, 0.4, 1.7}) {
        double fd_df = (f.f(y + eps) - f.f(y - eps)) / (2 * eps);
        double fd_f = (f.F(y + eps) - f.F(y - eps)) / (2 * eps);
        CHECK(fd_df == doctest::Approx(f.df(y)).epsilon(1e-6));
        CHECK(fd_f == doctest::Approx(f.f(y)).epsilon(1e-6));
    }
}

TEST_CASE("tabulated interpolant reproduces knots and stays monotone") {
    // samples of y^3 on a coarse grid
    std::vector<std::pair<double, double>> pts;
    for (double y = -2.0; y <= 2.01; y += 0.5)
        pts.push_back({y, y * y * y});
    Nonlinearity f = Nonlinearity::tabulated(pts);

    for (auto& [y, v] : pts)
        CHECK(f.f(y) == doctest::Approx(v).epsilon(1e-12));

    // monotone between knots: slope sign never flips
    double prev = f.f(-2.0);
    for (double y = -2.0 + 0.01; y <= 2.0; y += 0.01) {
        double cur = f.f(y);
        CHECK(cur >= prev - 1e-12);
        prev = cur;
    }
    CHECK(f.f(0.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(f.F(0.0) == doctest::Approx(0.0).epsilon(1e-14));

    // F really integrates f: compare against fine trapezoid quadrature
    double acc = 0.0, ylo = 0.0, yhi = 1.7;
    int n = 20000;
    double dy = (yhi - ylo) / n;
    for (int i = 0; i < n; ++i) {
        double a = ylo + i * dy, b = a + dy;
        acc += 0.5 * dy * (f.f(a) + f.f(b));
    }
    CHECK(f.F(1.7) == doctest::Approx(acc).epsilon(1e-6));
}

TEST_CASE("tabulated extrapolates linearly outside the table") {
    std::vector<std::pair<double, double>> pts = {{-1, -1}, {0, 0}, {1, 1}};
    Nonlinearity f = Nonlinearity::tabulated(pts);
    double slope = f.df(1.0);
    CHECK(f.f(3.0) == doctest::Approx(1.0 + 2.0 * slope));
    CHECK(f.df(3.0) == doctest::Approx(slope));
}

TEST_CASE("tabulated input validation") {
    using P = std::vector<std::pair<double, double>>;
    CHECK_THROWS_AS(Nonlinearity::tabulated(P{{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Nonlinearity::tabulated(P{{1, 1}, {1, 2}}), std::invalid_argument);  // not increasing
    CHECK_THROWS_AS(Nonlinearity::tabulated(P{{1, 1}, {2, 8}}), std::invalid_argument);  // 0 not straddled
}

} // TEST_SUITE
