#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlsq/fundamental_pair.hpp"

using namespace nlsq;

namespace {

// independent fixed-step RK4 oracle for (mu, mu', nu, nu')
std::array<double, 4> rk4_pair_oracle(const TimeCoefficient& omega, double s, double t,
                                      int n_steps) {
    OdeState y{0.0, 1.0, 1.0, 0.0};
    OdeRhs rhs = [&omega](double tt, const OdeState& yy, OdeState& dy) {
        const double O = omega.value(tt);
        dy[0] = yy[1];
        dy[1] = -O * yy[0];
        dy[2] = yy[3];
        dy[3] = -O * yy[2];
    };
    rk4_fixed(rhs, 4, s, (t - s) / n_steps, n_steps, y);
    return {y[0], y[1], y[2], y[3]};
}

}  // namespace

TEST_CASE("closed forms: Omega in {0, 1, -1}") {
    const double tol = 1e-12;
    auto p0 = solve_fundamental(TimeCoefficient::constant(0.0), 0.0, 10.0, tol);
    auto p1 = solve_fundamental(TimeCoefficient::constant(1.0), 0.0, 10.0, tol);
    auto pm = solve_fundamental(TimeCoefficient::constant(-1.0), 0.0, 10.0, tol);
    for (double t = 0.0; t <= 10.0; t += 0.37) {
        {
            const PairState st = p0.eval(t);
            CHECK(st.mu == doctest::Approx(t).epsilon(1e-10));
            CHECK(st.nu == doctest::Approx(1.0).epsilon(1e-10));
        }
        {
            const PairState st = p1.eval(t);
            CHECK(st.mu == doctest::Approx(std::sin(t)).epsilon(1e-9).scale(1.0));
            CHECK(st.nu == doctest::Approx(std::cos(t)).epsilon(1e-9).scale(1.0));
        }
        {
            const PairState st = pm.eval(t);
            CHECK(st.mu == doctest::Approx(std::sinh(t)).epsilon(1e-9));
            CHECK(st.nu == doctest::Approx(std::cosh(t)).epsilon(1e-9));
        }
    }
}

TEST_CASE("wronskian residual") {
    auto p1 = solve_fundamental(TimeCoefficient::constant(1.0), 0.0, 10.0, 1e-10);
    CHECK(std::abs(wronskian_residual(p1, 0.0)) < 1e-14);  // forced by initial data
    CHECK(std::abs(wronskian_residual(p1, 3.141592653589793)) < 1e-9);
    for (double t = 0.1; t < 10.0; t += 0.31)
        CHECK(std::abs(wronskian_residual(p1, t)) < 100.0 * 1e-10);

    const double tol = 1e-10;
    auto pd = solve_fundamental(TimeCoefficient::named("double_exponential"), 0.0, 3.0, tol);
    // oracle: independent high-order integrator at much higher accuracy
    const auto ref = rk4_pair_oracle(TimeCoefficient::named("double_exponential"), 0.0, 3.0,
                                     400000);
    const PairState st = pd.eval(3.0);
    CHECK(st.nu == doctest::Approx(ref[2]).epsilon(1e-8));
    CHECK(st.nu_dot == doctest::Approx(ref[3]).epsilon(1e-8));
    CHECK(std::abs(wronskian_residual(pd, 3.0)) <= 10.0 * tol);
    CHECK_THROWS_AS(wronskian_residual(pd, 4.0), Error);
}

TEST_CASE("backward integration and time-shift linearity") {
    auto c = TimeCoefficient::named("cosine");
    // backward solve
    auto pb = solve_fundamental(c, 0.0, -4.0, 1e-11);
    CHECK(pb.contains(-3.0));
    CHECK(std::abs(wronskian_residual(pb, -3.0)) < 1e-9);

    // pair for Omega(.+c) from 0 equals pair for Omega from c, shifted
    const double shift = 0.8;
    auto shifted = TimeCoefficient::named("cosine", {{"amplitude", 1.0},
                                                     {"frequency", 1.0},
                                                     {"phase", shift}});
    auto pa = solve_fundamental(shifted, 0.0, 5.0, 1e-11);
    auto pc = solve_fundamental(c, shift, 5.0 + shift, 1e-11);
    for (double t = 0.0; t <= 5.0; t += 0.63) {
        const PairState a = pa.eval(t);
        const PairState b = pc.eval(t + shift);
        CHECK(a.mu == doctest::Approx(b.mu).epsilon(1e-10).scale(1.0));
        CHECK(a.nu == doctest::Approx(b.nu).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("mehler coefficients: closed-form cases") {
    auto p0 = solve_fundamental(TimeCoefficient::constant(0.0), 0.0, 2.0, 1e-12);
    // Omega=0, t=1: alpha=1, beta=-1, gamma=1 (signed Lemma convention)
    const auto mc = mehler_coefficients(p0, 1.0);
    CHECK(mc.alpha == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(mc.beta == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(mc.gamma == doctest::Approx(1.0).epsilon(1e-8));
    // prefactor: e^{-i pi/4}/sqrt(2 pi)
    CHECK(std::abs(mc.prefactor) == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-12));
    CHECK(std::arg(mc.prefactor) == doctest::Approx(-M_PI / 4).epsilon(1e-12));

    // Omega=1, t=pi/4: alpha = cot(pi/4) = 1, beta = -1/sin(pi/4) = -sqrt(2),
    // gamma = cot(pi/4) = 1 (trig closed forms as oracle)
    auto p1 = solve_fundamental(TimeCoefficient::constant(1.0), 0.0, 1.0, 1e-12);
    const auto m1 = mehler_coefficients(p1, M_PI / 4);
    CHECK(m1.alpha == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(m1.beta == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-9));
    CHECK(m1.gamma == doctest::Approx(1.0).epsilon(1e-8));

    // divergence detected near t=0+, no silent NaN
    CHECK_THROWS_AS(mehler_coefficients(p0, 1e-10), CausticError);
}

TEST_CASE("gamma equals nu/mu (Wronskian identity oracle) while available") {
    // holds for every Omega; strong independent check on the integral route.
    // The accumulated integral is uncontrolled near a mu_dot crossing, so the
    // stiff double_exponential case gets a wider (still 4-digit) tolerance.
    struct Case {
        TimeCoefficient omega;
        double eps;
    };
    for (const auto& [omega, eps] : std::initializer_list<Case>{
             {TimeCoefficient::constant(1.0), 1e-7},
             {TimeCoefficient::constant(-1.0), 1e-7},
             {TimeCoefficient::named("cosine"), 1e-7},
             {TimeCoefficient::named("double_exponential"), 1e-4}}) {
        auto p = solve_fundamental(omega, 0.0, 1.4, 1e-12);
        for (double t = 0.1; t <= 1.4; t += 0.13) {
            if (!p.gamma_available(t)) break;
            const auto mc = mehler_coefficients(p, t);
            CHECK(mc.gamma == doctest::Approx(p.nu(t) / p.mu(t)).epsilon(eps));
        }
    }
}

TEST_CASE("gamma unavailable past mu_dot zero-crossing") {
    // Omega=1: mu_dot = cos crosses zero at pi/2
    auto p = solve_fundamental(TimeCoefficient::constant(1.0), 0.0, 3.0, 1e-11);
    CHECK(p.mu_dot_crossing() == doctest::Approx(M_PI / 2).epsilon(1e-8));
    CHECK(p.gamma_available(1.0));
    CHECK_FALSE(p.gamma_available(2.0));
    CHECK_THROWS_AS(mehler_coefficients(p, 2.0), GammaUnavailableError);
    // mu(2.0) is far from zero, so this is not a caustic failure
    CHECK(std::abs(p.mu(2.0)) > 0.5);
}

TEST_CASE("caustic_times") {
    auto p1 = solve_fundamental(TimeCoefficient::constant(1.0), 0.0, 7.0, 1e-11);
    const auto z = caustic_times(p1, 0.1, 7.0);
    REQUIRE(z.size() == 2);
    CHECK(z[0] == doctest::Approx(M_PI).epsilon(1e-9));
    CHECK(z[1] == doctest::Approx(2 * M_PI).epsilon(1e-9));

    auto pm = solve_fundamental(TimeCoefficient::constant(-1.0), 0.0, 10.0, 1e-11);
    CHECK(caustic_times(pm, 0.1, 10.0).empty());

    // pulsed profile: dense sampling + bisection oracle agreement
    auto pp = solve_fundamental(TimeCoefficient::named("pulsed"), 0.0, 8.0, 1e-10);
    const auto zp = caustic_times(pp, 0.0, 8.0);
    for (double t : zp) CHECK(std::abs(pp.mu(t)) < 1e-8);
    // oracle: scan mu on a fine grid; each sign change matches a reported zero
    int sign_changes = 0;
    double prev = pp.mu(1e-6);
    for (int i = 1; i <= 80000; ++i) {
        const double t = 8.0 * i / 80000.0;
        const double m = pp.mu(t);
        if ((prev < 0) != (m < 0)) ++sign_changes;
        prev = m;
    }
    CHECK(static_cast<int>(zp.size()) == sign_changes);
}

TEST_CASE("caustic detection completeness on Omega=1") {
    auto p = solve_fundamental(TimeCoefficient::constant(1.0), 0.0, 20.0, 1e-11);
    const double lo = 0.05, hi = 19.5;
    const auto z = caustic_times(p, lo, hi);
    const int expected = static_cast<int>(hi / M_PI);  // zeros at k*pi
    CHECK(static_cast<int>(z.size()) == expected);
}

TEST_CASE("structural checks") {
    // Omega=-1: all four monotonicity flags
    auto pm = solve_fundamental(TimeCoefficient::constant(-1.0), 0.0, 5.0, 1e-11);
    auto rm = structural_checks(pm, TimeCoefficient::constant(-1.0), 0.0, 5.0);
    CHECK(rm.omega_nonpositive);
    CHECK(rm.nu_ge_one);
    CHECK(rm.mu_ge_elapsed);
    CHECK(rm.nu_dot_ge_zero);
    CHECK(rm.mu_dot_ge_one);

    // boundary case Omega=0
    auto p0 = solve_fundamental(TimeCoefficient::constant(0.0), 0.0, 5.0, 1e-11);
    auto r0 = structural_checks(p0, TimeCoefficient::constant(0.0), 0.0, 5.0);
    CHECK(r0.omega_nonpositive);
    CHECK(r0.nu_ge_one);
    CHECK(r0.mu_ge_elapsed);

    // bounded oscillating Omega: envelope constant stays modest
    auto pc = solve_fundamental(TimeCoefficient::named("cosine"), 0.0, 10.0, 1e-11);
    auto rc = structural_checks(pc, TimeCoefficient::named("cosine"), 0.0, 10.0);
    CHECK_FALSE(rc.omega_nonpositive);
    CHECK(rc.envelope_C <= 2.0);
}

TEST_CASE("solver error paths") {
    CHECK_THROWS_AS(solve_fundamental(TimeCoefficient::constant(1.0), 0.0, 1.0, -1.0),
                    ConfigError);
    // omega evaluation failure surfaces (table range exceeded)
    auto tab = TimeCoefficient::table({0.0, 1.0}, {1.0, 1.0});
    CHECK_THROWS_AS(solve_fundamental(tab, 0.0, 2.0, 1e-10), Error);
}
