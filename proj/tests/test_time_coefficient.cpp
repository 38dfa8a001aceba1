#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlsq/time_coefficient.hpp"

using nlsq::TimeCoefficient;

TEST_CASE("constant coefficient") {
    auto c = TimeCoefficient::constant(-2.5);
    CHECK(c.value(0.0) == -2.5);
    CHECK(c.value(1e6) == -2.5);
    CHECK(c.derivative(3.0) == 0.0);
    CHECK(TimeCoefficient::constant(0.0).is_zero());
    CHECK_FALSE(c.is_zero());
}

TEST_CASE("table interpolation reproduces a cubic exactly") {
    // not-a-knot cubic splines are exact on cubics
    auto f = [](double t) { return 0.5 * t * t * t - t * t + 2.0 * t - 3.0; };
    auto fd = [](double t) { return 1.5 * t * t - 2.0 * t + 2.0; };
    std::vector<double> ts, vs;
    for (int i = 0; i <= 10; ++i) {
        ts.push_back(-1.0 + 0.4 * i);
        vs.push_back(f(ts.back()));
    }
    auto c = TimeCoefficient::table(ts, vs);
    for (double t : {-0.97, -0.5, 0.13, 1.07, 2.49, 2.999}) {
        CHECK(c.value(t) == doctest::Approx(f(t)).epsilon(1e-12));
        CHECK(c.derivative(t) == doctest::Approx(fd(t)).epsilon(1e-9));
    }
}

TEST_CASE("table rejects bad input and out-of-range evaluation") {
    CHECK_THROWS_AS(TimeCoefficient::table({0.0, 0.0, 1.0}, {1.0, 2.0, 3.0}),
                    nlsq::ConfigError);
    CHECK_THROWS_AS(TimeCoefficient::table({0.0}, {1.0}), nlsq::ConfigError);
    auto c = TimeCoefficient::table({0.0, 1.0, 2.0}, {0.0, 1.0, 4.0});
    CHECK_THROWS_AS(c.value(-0.5), nlsq::Error);
    CHECK_THROWS_AS(c.value(2.5), nlsq::Error);
}

TEST_CASE("pulsed profile: plateaus at n^2 on [4n+1, 4n+2]") {
    auto p = TimeCoefficient::named("pulsed");
    CHECK(p.value(0.0) == 0.0);
    CHECK(p.value(5.5) == 1.0);    // n=1 plateau [5,6]
    CHECK(p.value(9.5) == 4.0);    // n=2 plateau [9,10]
    CHECK(p.value(17.2) == 16.0);  // n=4 plateau [17,18]
    CHECK(p.value(33.9) == 64.0);  // n=8 plateau [33,34]
    CHECK(p.value(7.0) == 0.0);    // between plateaus
    CHECK(p.value(5.0) == 1.0);
    CHECK(p.value(6.0) == 1.0);
}

TEST_CASE("double_exponential profile matches -mu''/mu and is smooth at 0") {
    auto o = TimeCoefficient::named("double_exponential");
    auto mu = [](double t) { return std::exp(1.0 - std::exp(t)) - std::exp(1.0 - std::exp(2 * t)); };
    // independent route: second central difference of mu itself
    auto mudd_fd = [&mu](double t) {
        const double h = 1e-4;
        return (mu(t + h) - 2.0 * mu(t) + mu(t - h)) / (h * h);
    };
    for (double t : {-1.0, -0.1, 0.5, 1.0, 2.0})
        CHECK(o.value(t) == doctest::Approx(-mudd_fd(t) / mu(t)).epsilon(1e-5));
    CHECK(o.value(0.0) == doctest::Approx(7.0));
    // both sides of the series/direct branch point, against 50-digit references
    CHECK(o.value(0.999e-3) == doctest::Approx(7.00749032718502517).epsilon(1e-12));
    CHECK(o.value(1.001e-3) == doctest::Approx(7.00750531845527058).epsilon(1e-12));
    // derivative consistency with a central difference
    const double h = 1e-6;
    for (double t : {-0.5, 0.7, 2.0})
        CHECK(o.derivative(t) ==
              doctest::Approx((o.value(t + h) - o.value(t - h)) / (2 * h)).epsilon(1e-6));
}

TEST_CASE("named profiles evaluate deterministically") {
    auto a = TimeCoefficient::named("cosine", {{"amplitude", 1.5}, {"frequency", 2.0}});
    auto b = TimeCoefficient::named("cosine", {{"amplitude", 1.5}, {"frequency", 2.0}});
    for (double t : {0.0, 0.1, 17.3, -2.9})
        CHECK(a.value(t) == b.value(t));  // bit-identical
    CHECK(a.value(0.3) == 1.5 * std::cos(0.6));
}

TEST_CASE("json round trip") {
    auto tab = TimeCoefficient::table({0.0, 0.5, 1.0, 2.0}, {1.0, 0.2, -0.4, 3.0});
    auto tab2 = TimeCoefficient::from_json(tab.to_json());
    for (double t : {0.0, 0.33, 1.7, 2.0}) CHECK(tab.value(t) == tab2.value(t));

    auto named = TimeCoefficient::named("pulsed");
    auto named2 = TimeCoefficient::from_json(named.to_json());
    CHECK(named2.value(5.5) == 1.0);

    auto cst = TimeCoefficient::from_json(TimeCoefficient::constant(-1.0).to_json());
    CHECK(cst.value(9.0) == -1.0);

    CHECK_THROWS_AS(TimeCoefficient::from_json({{"kind", "mystery"}}), nlsq::ConfigError);
    CHECK_THROWS_AS(TimeCoefficient::named("nope"), nlsq::ConfigError);
}
