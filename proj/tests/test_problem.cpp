#include "doctest.h"

#include "turnpike/problem.hpp"

#include <cmath>

using namespace turnpike;

namespace {

ProblemSpec sane_spec() {
    ProblemSpec s;
    s.domain = {0.0, 1.0};
    s.control_region = {0.0, 0.5};
    s.observation_region = {0.0, 1.0};
    s.beta = 1000.0;
    s.horizon = 5.0;
    s.target = Profile::constant(1.0);
    s.initial = Profile::constant(10.0);
    s.f = Nonlinearity::power(1.0, 3.0);
    return s;
}

} // namespace

TEST_SUITE("problem") {

TEST_CASE("constant and expression profiles") {
    Profile c = Profile::constant(2.5);
    CHECK(c(0.0) == doctest::Approx(2.5));
    CHECK(c(0.9) == doctest::Approx(2.5));

    Profile e = Profile::expression("sin(pi*x)");
    CHECK(e(0.5) == doctest::Approx(1.0));
    CHECK(e.text() == "sin(pi*x)");

    // constants round-trip through text exactly
    Profile tight = Profile::constant(0.1);
    Profile back = Profile::expression(tight.text());
    CHECK(back(0.3) == tight(0.3));
}

TEST_CASE("well-formed spec validates clean") {
    auto problems = validate_spec(sane_spec());
    CHECK(problems.empty());
}

TEST_CASE("interval orientation and containment are enforced") {
    auto s = sane_spec();
    s.domain = {1.0, 0.0};
    CHECK(!validate_spec(s).empty());

    s = sane_spec();
    s.control_region = {0.5, 0.2};
    CHECK(!validate_spec(s).empty());

    s = sane_spec();
    s.control_region = {-0.5, 0.5};  // sticks out of the domain
    CHECK(!validate_spec(s).empty());

    s = sane_spec();
    s.observation_region = {0.0, 2.0};
    CHECK(!validate_spec(s).empty());
}

TEST_CASE("scalar parameter screening") {
    auto s = sane_spec();
    s.beta = -1.0;
    CHECK(!validate_spec(s).empty());

    s = sane_spec();
    s.horizon = 0.0;
    CHECK(!validate_spec(s).empty());

    s = sane_spec();
    s.horizon = std::nan("");
    CHECK(!validate_spec(s).empty());

    s = sane_spec();
    s.beta = 0.0;  // pure control-energy minimisation is legitimate
    CHECK(validate_spec(s).empty());
}

TEST_CASE("profiles must be finite on the domain") {
    auto s = sane_spec();
    s.initial = Profile::expression("1/(x - 0.5)");
    CHECK(!validate_spec(s).empty());
}

TEST_CASE("nonlinearity screening: f(0)=0, monotone, antiderivative consistent") {
    auto s = sane_spec();
    s.f = Nonlinearity::custom(
        "shifted", [](double y) { return y + 1.0; }, [](double) { return 1.0; },
        [](double y) { return 0.5 * y * y + y; });
    CHECK(!validate_spec(s).empty());  // f(0) != 0

    s = sane_spec();
    s.f = Nonlinearity::custom(
        "decreasing", [](double y) { return -y; }, [](double) { return -1.0; },
        [](double y) { return -0.5 * y * y; });
    CHECK(!validate_spec(s).empty());  // f' < 0

    s = sane_spec();
    s.f = Nonlinearity::custom(
        "wrong-F", [](double y) { return y; }, [](double) { return 1.0; },
        [](double y) { return y; });  // F' = 1 != f
    CHECK(!validate_spec(s).empty());
}

TEST_CASE("grid construction from a spec") {
    auto s = sane_spec();
    DiscretizationSpec d;
    d.nx = 99;
    d.nt = 100;
    Grid g = make_grid(s, d);
    CHECK(g.nx == 99);
    CHECK(g.h == doctest::Approx(0.01));
    CHECK(g.x(0) == doctest::Approx(0.01));
    CHECK(g.x(98) == doctest::Approx(0.99));
    CHECK(d.dt(s) == doctest::Approx(0.05));
}

TEST_CASE("sampling a profile lands on interior nodes") {
    auto s = sane_spec();
    s.initial = Profile::expression("x");
    DiscretizationSpec d;
    d.nx = 9;
    Grid g = make_grid(s, d);
    Field v = sample(g, s.initial);
    REQUIRE(v.size() == 9);
    CHECK(v[0] == doctest::Approx(0.1));
    CHECK(v[8] == doctest::Approx(0.9));
}

} // TEST_SUITE
