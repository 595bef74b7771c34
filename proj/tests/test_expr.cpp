#include "doctest.h"

#include "turnpike/expr.hpp"

#include <cmath>
#include <stdexcept>

using turnpike::Expr;

TEST_SUITE("expr") {

TEST_CASE("constants and arithmetic") {
    CHECK(Expr::parse("2 + 3 * 4").eval(0.0) == doctest::Approx(14.0));
    CHECK(Expr::parse("(2 + 3) * 4").eval(0.0) == doctest::Approx(20.0));
    CHECK(Expr::parse("2 - 3 - 4").eval(0.0) == doctest::Approx(-5.0));   // left assoc
    CHECK(Expr::parse("16 / 4 / 2").eval(0.0) == doctest::Approx(2.0));
    CHECK(Expr::parse("-3 + 1").eval(0.0) == doctest::Approx(-2.0));
    CHECK(Expr::parse("2^3^2").eval(0.0) == doctest::Approx(512.0));      // right assoc
    CHECK(Expr::parse("-2^2").eval(0.0) == doctest::Approx(-4.0));        // unary binds looser
}

TEST_CASE("variable and named constants") {
    Expr e = Expr::parse("x*x - 1");
    CHECK(e.eval(3.0) == doctest::Approx(8.0));
    CHECK(e.eval(-3.0) == doctest::Approx(8.0));
    CHECK(Expr::parse("pi").eval(0.0) == doctest::Approx(M_PI));
    CHECK(Expr::parse("e").eval(0.0) == doctest::Approx(std::exp(1.0)));
}

TEST_CASE("functions") {
    CHECK(Expr::parse("sin(pi/2)").eval(0.0) == doctest::Approx(1.0));
    CHECK(Expr::parse("cos(0)").eval(0.0) == doctest::Approx(1.0));
    CHECK(Expr::parse("exp(1)").eval(0.0) == doctest::Approx(std::exp(1.0)));
    CHECK(Expr::parse("log(e)").eval(0.0) == doctest::Approx(1.0));
    CHECK(Expr::parse("sqrt(16)").eval(0.0) == doctest::Approx(4.0));
    CHECK(Expr::parse("abs(-7)").eval(0.0) == doctest::Approx(7.0));
    CHECK(Expr::parse("tanh(0)").eval(0.0) == doctest::Approx(0.0));
    CHECK(Expr::parse("min(2, 5)").eval(0.0) == doctest::Approx(2.0));
    CHECK(Expr::parse("max(2, 5)").eval(0.0) == doctest::Approx(5.0));
    CHECK(Expr::parse("pow(2, 10)").eval(0.0) == doctest::Approx(1024.0));
}

TEST_CASE("typical profile snippets") {
    Expr bump = Expr::parse("sin(pi*x)");
    CHECK(bump.eval(0.5) == doctest::Approx(1.0));
    CHECK(bump.eval(0.0) == doctest::Approx(0.0).epsilon(1e-12));

    Expr plateau = Expr::parse("10 * exp(-(x-0.5)^2 / 0.01)");
    CHECK(plateau.eval(0.5) == doctest::Approx(10.0));
    CHECK(plateau.eval(0.0) < 1e-8);
}

TEST_CASE("parse errors carry position context") {
    CHECK_THROWS_AS(Expr::parse("2 +"), std::invalid_argument);
    CHECK_THROWS_AS(Expr::parse("(1 + 2"), std::invalid_argument);
    CHECK_THROWS_AS(Expr::parse("foo(1)"), std::invalid_argument);
    CHECK_THROWS_AS(Expr::parse("1 2"), std::invalid_argument);
    CHECK_THROWS_AS(Expr::parse(""), std::invalid_argument);
    CHECK_THROWS_AS(Expr::parse("y + 1"), std::invalid_argument);   // only x is bound
    CHECK_THROWS_AS(Expr::parse("min(1)"), std::invalid_argument);  // arity

    try {
        Expr::parse("2 * (3 +");
    } catch (const std::invalid_argument& err) {
        // message should point at the offending spot
        CHECK(std::string(err.what()).find('^') != std::string::npos);
    }
}

TEST_CASE("deeply nested input is rejected, not crashed on") {
    std::string s = "x";
    for (int i = 0; i < 200; ++i) s = "sin(" + s + ")";
    CHECK_THROWS_AS(Expr::parse(s), std::invalid_argument);
    // moderate nesting is fine
    std::string ok = "x";
    for (int i = 0; i < 20; ++i) ok = "sin(" + ok + ")";
    CHECK_NOTHROW(Expr::parse(ok).eval(0.3));
}

TEST_CASE("copies evaluate independently") {
    Expr a = Expr::parse("x + 1");
    Expr b = a;
    Expr c = Expr::parse("x * 2");
    c = a;
    CHECK(b.eval(1.0) == doctest::Approx(2.0));
    CHECK(c.eval(1.0) == doctest::Approx(2.0));
}

} // TEST_SUITE
