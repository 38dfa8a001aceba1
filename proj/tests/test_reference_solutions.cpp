#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "nlsq/field_ops.hpp"
#include "nlsq/reference_solutions.hpp"
#include "nlsq/strang.hpp"

using namespace nlsq;

namespace {

// d=1 closed form: Q(x) = 3^{1/4} sech^{1/2}(2 sqrt(2) x)
double q1_closed(double x) {
    return std::pow(3.0, 0.25) * std::sqrt(1.0 / std::cosh(2.0 * std::sqrt(2.0) * x));
}

}  // namespace

TEST_CASE("closed form satisfies the d=1 equation (substitution oracle)") {
    // Q = A s^{1/2}, s = sech(bx): Q'' = A b^2 s^{1/2} (th^2/4 - s^2/2)
    const double b = 2.0 * std::sqrt(2.0);
    const double A = std::pow(3.0, 0.25);
    for (double x : {0.0, 0.17, 0.5, 1.1, 2.3}) {
        const double s = 1.0 / std::cosh(b * x);
        const double th = std::tanh(b * x);
        const double Q = A * std::sqrt(s);
        const double Qpp = A * b * b * std::sqrt(s) * (0.25 * th * th - 0.5 * s * s);
        const double res = -0.5 * Qpp + Q - std::pow(Q, 5);
        CHECK(std::abs(res) < 1e-12);
    }
}

TEST_CASE("ground state shooting: d=1 central value and profile") {
    auto gs = GroundState::compute(1, 1e-8);
    CHECK(gs.q0() == doctest::Approx(std::pow(3.0, 0.25)).epsilon(1e-8));
    CHECK(gs.residual_bound() <= 1e-8);
    for (double r : {0.0, 0.3, 1.0, 2.0, 4.0})
        CHECK(gs.eval(r) == doctest::Approx(q1_closed(r)).epsilon(5e-8).scale(1.0));
    // radial symmetry of evaluation
    CHECK(gs.eval(-1.3) == gs.eval(1.3));
    // positivity and monotone decay on the stored grid
    const auto& q = gs.samples();
    for (std::size_t i = 1; i < q.size(); ++i) {
        CHECK(q[i] >= 0.0);
        CHECK(q[i] <= q[i - 1] + 1e-12);
    }
}

TEST_CASE("ground state shooting: d=2 certified residual") {
    auto gs = GroundState::compute(2, 1e-8);
    CHECK(gs.residual_bound() <= 1e-8);
    // scaled Townes value (independent shooting cross-check)
    CHECK(gs.q0() == doctest::Approx(2.206200864651).epsilon(1e-6));
}

TEST_CASE("ground state cache round trip") {
    const std::string dir = "/tmp/nlsq_gs_cache";
    std::filesystem::remove_all(dir);
    auto a = GroundState::cached(1, 1e-8, dir);
    CHECK(std::filesystem::exists(dir));
    auto b = GroundState::cached(1, 1e-8, dir);  // loads from disk
    CHECK(a.q0() == b.q0());
    CHECK(a.residual_bound() == b.residual_bound());
    CHECK(a.samples().size() == b.samples().size());
}

TEST_CASE("blowup family: free case reduces to t^{-d/2} Q(x/t) e^{i|x|^2/2t - i/t}") {
    auto gs = GroundState::cached(1, 1e-8, "/tmp/nlsq_gs_cache");
    auto g = Grid::make1d(1024, 12.0);
    auto pair = solve_fundamental(TimeCoefficient::constant(0.0), 0.0, 2.0, 1e-12);
    const double t = 0.9;
    auto u = blowup_solution(gs, pair, t, g);
    for (int i = 0; i < g.points(0); i += 31) {
        const double x = g.coord(0, i);
        const cplx ref = std::pow(t, -0.5) * gs.eval(x / t) *
                         std::polar(1.0, x * x / (2 * t) - 1.0 / t);
        CHECK(std::abs(u[i] - ref) < 1e-10);
    }
    CHECK_THROWS_AS(blowup_solution(gs, pair, 0.0, g), Error);  // mu = 0
}

TEST_CASE("blowup family: mass invariance and gradient scaling") {
    auto gs = GroundState::cached(1, 1e-8, "/tmp/nlsq_gs_cache");
    auto g = Grid::make1d(2048, 12.0);
    auto pair = solve_fundamental(TimeCoefficient::named("cosine"), 0.0, 1.5, 1e-12);
    double mass0 = 0.0, c0 = 0.0;
    for (double t : {0.6, 0.9, 1.2}) {
        auto u = blowup_solution(gs, pair, t, g);
        const double m = l2_norm(u);
        const double gn = grad_norm(u) * pair.mu(t);  // ~ const to leading order
        if (mass0 == 0.0) {
            mass0 = m;
            c0 = gn;
        } else {
            CHECK(m == doctest::Approx(mass0).epsilon(1e-8));
            CHECK(gn == doctest::Approx(c0).epsilon(0.05));
        }
    }
}

TEST_CASE("harmonic gaussian: exact norms and time independence") {
    const int n = 4, d = 1;
    auto g = Grid::make1d(512, 8.0);
    auto u = harmonic_gaussian(n, d, 1.3, 1.0, g);
    CHECK(l2_norm(u) == doctest::Approx(std::pow(M_PI / n, d / 4.0)).epsilon(1e-10));
    for (double q : {4.0, 6.0})
        CHECK(lq_norm(u, q) ==
              doctest::Approx(std::pow(2 * M_PI / (n * q), d / (2.0 * q))).epsilon(1e-10));
    auto u2 = harmonic_gaussian(n, d, 2.9, 1.0, g);
    CHECK(lq_norm(u2, 4.0) == doctest::Approx(lq_norm(u, 4.0)).epsilon(1e-13));
}

TEST_CASE("nonlinear stationary: lambda=0 gives the harmonic ground state") {
    auto g = Grid::make1d(256, 8.0);
    auto st = nonlinear_stationary(0.5, 0.0, 1, 1, g, 1e-10);
    CHECK(st.omega == doctest::Approx(0.5));
    CHECK(l2_norm(st.psi) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(nonlinear_stationary(1.0, 0.0, 1, 1, g, 1e-10), ConfigError);
}

TEST_CASE("nonlinear stationary: regime checks") {
    auto g = Grid::make1d(256, 8.0);
    CHECK_THROWS_AS(nonlinear_stationary(0.4, 1.0, 1, 1, g, 1e-8), ConfigError);
    CHECK_THROWS_AS(nonlinear_stationary(0.6, -1.0, 1, 1, g, 1e-8), ConfigError);
}

TEST_CASE("nonlinear stationary: small-coupling perturbation oracle") {
    // omega(m) = d/2 + lambda m integral(g0^4) + O(m^2), integral = 1/sqrt(2 pi)
    auto g = Grid::make1d(256, 8.0);
    const double domega = 1e-3;
    auto st = nonlinear_stationary(0.5 + domega, 1.0, 1, 1, g, 1e-9);
    const double m_expected = domega * std::sqrt(2.0 * M_PI);
    CHECK(st.mass == doctest::Approx(m_expected).epsilon(0.05));
    CHECK(st.residual <= 1e-9);
}

TEST_CASE("nonlinear stationary: evolution stays on |psi| (short run)") {
    auto g = Grid::make1d(256, 8.0);
    auto st = nonlinear_stationary(1.0, 1.0, 1, 1, g, 1e-9);
    CHECK(st.omega == doctest::Approx(1.0).epsilon(1e-8));
    QuadraticPotential V(1, TimeCoefficient::constant(1.0));
    NonlinearitySpec nl;
    nl.lambda = 1.0;
    nl.sigma = 1;
    StepControls c;
    c.dt = 2e-4;
    c.snapshot_stride = 1000000;
    auto tr = strang_propagate(st.psi, V, nl, 0.0, 1.0, c);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        worst =
            std::max(worst, std::abs(std::abs(tr.final_field[i]) - std::abs(st.psi[i])));
    CHECK(worst < 1e-6);

    // phase-fit: u(1) = e^{-i omega} psi, so arg<u(1), psi> = +omega
    cplx corr(0.0, 0.0);
    for (std::size_t i = 0; i < g.size(); ++i)
        corr += std::conj(tr.final_field[i]) * st.psi[i];
    CHECK(std::abs(std::remainder(std::arg(corr) - st.omega, 2 * M_PI)) < 1e-4);
}
