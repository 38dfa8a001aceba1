#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "nlsq/reference_solutions.hpp"
#include "nlsq/strang.hpp"

using namespace nlsq;

namespace {

double series_max_abs(const Series& s) {
    double m = 0.0;
    for (double v : s.v) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

TEST_CASE("admissible pairs") {
    const double inf = std::numeric_limits<double>::infinity();
    for (int d : {1, 2, 3}) CHECK(admissible(inf, 2.0, d));
    CHECK(admissible(8.0, 4.0, 1));   // (4s+4)/(ds), 2s+2 at s=1, d=1
    CHECK(admissible(4.0, inf, 1));   // d=1 endpoint allowed
    CHECK_FALSE(admissible(4.0, inf, 2));
    CHECK(admissible(4.0, 3.0, 3));
    CHECK_FALSE(admissible(2.0, 6.0, 3));  // q = 2d/(d-2) excluded
    CHECK_FALSE(admissible(8.0, 4.0, 2));  // scaling relation violated
    CHECK_FALSE(admissible(8.0, 1.5, 1));  // q < 2
}

TEST_CASE("growth_fit: synthetic power law and exponential") {
    Series alg, expo;
    for (int i = 0; i <= 120; ++i) {
        const double t = 0.5 + (16.0 - 0.5) * i / 120.0;
        alg.t.push_back(t);
        alg.v.push_back(3.0 * std::pow(t, 2.5));
        expo.t.push_back(t);
        expo.v.push_back(0.7 * std::exp(1.3 * t));
    }
    auto fa = growth_fit(alg);
    CHECK(fa.classification == "algebraic");
    CHECK(fa.alg_exponent == doctest::Approx(2.5).epsilon(1e-10));
    auto fe = growth_fit(expo);
    CHECK(fe.classification == "exponential");
    CHECK(fe.exp_rate == doctest::Approx(1.3).epsilon(1e-10));

    Series tiny;
    for (int i = 0; i < 10; ++i) {
        tiny.t.push_back(1.0 + i);
        tiny.v.push_back(1.0);
    }
    CHECK_THROWS_AS(growth_fit(tiny), Error);  // tail < 20 samples

    Series narrow;
    for (int i = 0; i <= 100; ++i) {
        narrow.t.push_back(10.0 + 0.01 * i);  // span 10 -> 11 < 4x
        narrow.v.push_back(std::exp(narrow.t.back()));
    }
    CHECK_THROWS_AS(growth_fit(narrow), Error);
}

TEST_CASE("energy law residual: bounded oscillating potential, nonlinear") {
    auto g = Grid::make1d(256, 8.0);
    auto u0 = gaussian_field(g, {0.5, 0, 0}, {1, 1, 1}, {0, 0, 0});
    QuadraticPotential V(1, TimeCoefficient::named("cosine"));
    NonlinearitySpec nl;
    nl.lambda = 1.0;
    DiagnosticsSelection sel;
    sel.energy = true;

    double prev = 0.0;
    for (double dt : {2e-3, 1e-3}) {
        StepControls c;
        c.dt = dt;
        c.snapshot_stride = 10;
        auto tr = strang_propagate(u0, V, nl, 0.0, 1.0, c, sel);
        const double r = series_max_abs(energy_law_residual(tr));
        if (prev > 0.0) CHECK(prev / r >= 3.0);  // second-order refinement
        prev = r;
        CHECK(r < 1e-3);
    }

    // h(t)-coupled runs refuse the (autonomous) law
    NonlinearitySpec nlh;
    nlh.h = TimeCoefficient::constant(1.0);
    StepControls c;
    c.dt = 1e-3;
    auto tr = strang_propagate(u0, V, nlh, 0.0, 0.1, c, sel);
    CHECK_THROWS_AS(energy_law_residual(tr), Error);
}

TEST_CASE("virial identity: free gaussian has exactly quadratic variance") {
    auto g = Grid::make1d(512, 16.0);
    auto u0 = gaussian_field(g, {0, 0, 0}, {1, 1, 1}, {0, 0, 0});
    ZeroPotential noV;
    NonlinearitySpec lin;
    DiagnosticsSelection sel;
    sel.virial = true;
    StepControls c;
    c.dt = 1e-3;
    c.snapshot_stride = 50;
    auto tr = strang_propagate(u0, noV, lin, 0.0, 2.0, c, sel);
    CHECK(series_max_abs(virial_residual(tr)) < 1e-7);
    CHECK(series_max_abs(moment_rate_residual(tr)) < 1e-5);
}

TEST_CASE("virial identity: coherent state oscillates at frequency 2") {
    auto g = Grid::make1d(512, 12.0);
    auto u0 = gaussian_field(g, {1.2, 0, 0}, {1, 1, 1}, {0, 0, 0});
    QuadraticPotential V(1, TimeCoefficient::constant(1.0));
    NonlinearitySpec lin;
    DiagnosticsSelection sel;
    sel.virial = true;
    StepControls c;
    c.dt = 1e-3;
    c.snapshot_stride = 10;
    auto tr = strang_propagate(u0, V, lin, 0.0, 2 * M_PI, c, sel);
    CHECK(series_max_abs(virial_residual(tr)) < 1e-3);
    // classical-motion oracle: y(t) = y(0) + mass * (x0^2/2)(cos 2t - 1)
    const auto& rec = tr.records;
    const double y0 = rec.front().y;
    const double mass2 = rec.front().mass * rec.front().mass;
    double worst = 0.0;
    for (const auto& r : rec) {
        const double expected = y0 + mass2 * 0.5 * 1.2 * 1.2 * (std::cos(2 * r.t) - 1.0);
        worst = std::max(worst, std::abs(r.y - expected));
    }
    CHECK(worst < 1e-5);
}

TEST_CASE("ab laws: lambda=0 commutation keeps ||Au||, ||Bu|| constant") {
    auto g = Grid::make1d(512, 12.0);
    auto u0 = gaussian_field(g, {0.5, 0, 0}, {1, 1, 1}, {0.3, 0, 0});
    QuadraticPotential V(1, TimeCoefficient::named("cosine"));
    NonlinearitySpec lin;
    auto pair = solve_fundamental(TimeCoefficient::named("cosine"), 0.0, 1.5, 1e-12);
    DiagnosticsSelection sel;
    sel.ab_laws = true;
    StepControls c;
    c.dt = 5e-4;
    c.snapshot_stride = 100;
    auto tr = strang_propagate(u0, V, lin, 0.0, 1.5, c, sel, &pair);
    const double a0 = tr.records.front().a_norm[0];
    const double b0 = tr.records.front().b_norm[0];
    for (const auto& r : tr.records) {
        CHECK(std::abs(r.a_norm[0] - a0) / a0 < 1e-7);
        CHECK(std::abs(r.b_norm[0] - b0) / b0 < 1e-7);
    }
}

TEST_CASE("ab laws: critical quintic conserves both bracketed quantities") {
    auto g = Grid::make1d(256, 8.0);
    auto u0 = gaussian_field(g, {0, 0, 0}, {1, 1, 1}, {0, 0, 0});
    QuadraticPotential V(1, TimeCoefficient::constant(1.0));
    NonlinearitySpec nl;
    nl.lambda = 1.0;
    nl.sigma = 2;  // 2 - d sigma = 0
    auto pair = solve_fundamental(TimeCoefficient::constant(1.0), 0.0, 1.0, 1e-12);
    DiagnosticsSelection sel;
    sel.ab_laws = true;
    StepControls c;
    c.dt = 5e-4;
    c.snapshot_stride = 50;
    auto tr = strang_propagate(u0, V, nl, 0.0, 1.0, c, sel, &pair);
    const double ta = tr.records.front().theta_a, tb = tr.records.front().theta_b;
    for (const auto& r : tr.records) {
        CHECK(std::abs(r.theta_a - ta) / std::abs(ta) < 1e-6);
        CHECK(std::abs(r.theta_b - tb) / std::abs(tb) < 1e-6);
        CHECK(r.ab_rhs_a == 0.0);
    }
    auto [sa, sb] = ab_law_residuals(tr);
    CHECK(series_max_abs(sa) < 1e-4);
    CHECK(series_max_abs(sb) < 1e-4);
}

TEST_CASE("pseudo-conformal law: V=0 critical power is conserved") {
    auto g = Grid::make1d(256, 10.0);
    auto u0 = gaussian_field(g, {0, 0, 0}, {1, 1, 1}, {0, 0, 0});
    ZeroPotential noV;
    NonlinearitySpec nl;
    nl.lambda = 1.0;
    nl.sigma = 2;
    DiagnosticsSelection sel;
    sel.pseudo_conformal = true;
    StepControls c;
    c.dt = 5e-4;
    c.snapshot_stride = 50;
    auto tr = strang_propagate(u0, noV, nl, 0.0, 1.0, c, sel);
    const double p0 = tr.records.front().pc_theta;
    for (const auto& r : tr.records)
        CHECK(std::abs(r.pc_theta - p0) / std::abs(p0) < 1e-6);
    CHECK(series_max_abs(pseudo_conformal_residual(tr)) < 1e-4);

    // potential present: refused
    QuadraticPotential V(1, TimeCoefficient::constant(1.0));
    DiagnosticsSelection plain;
    auto tr2 = strang_propagate(u0, V, nl, 0.0, 0.1, c, plain);
    CHECK_THROWS_AS(pseudo_conformal_residual(tr2), Error);
}

TEST_CASE("pseudo-conformal law: d=3 defocusing quantity is nonincreasing") {
    auto g = Grid::make(3, {32, 32, 32}, {6.0, 6.0, 6.0});
    auto u0 = gaussian_field(g, {0, 0, 0}, {1, 1, 1}, {0, 0, 0});
    ZeroPotential noV;
    NonlinearitySpec nl;
    nl.lambda = 1.0;
    nl.sigma = 1;  // 2 - d sigma = -1 < 0
    DiagnosticsSelection sel;
    sel.energy = false;
    sel.pseudo_conformal = true;
    StepControls c;
    c.dt = 2e-3;
    c.snapshot_stride = 25;
    auto tr = strang_propagate(u0, noV, nl, 0.0, 0.5, c, sel);
    for (std::size_t i = 1; i < tr.records.size(); ++i)
        CHECK(tr.records[i].pc_theta <= tr.records[i - 1].pc_theta + 1e-8);
}

TEST_CASE("mixed norm: sup-in-time and the plateau closed form") {
    // Omega = n^2 plateau: ||u(t)||_4 constant, so the L^8_t L^4_x norm over
    // [0, T] is T^{1/8} (2 pi/(4n))^{1/8}
    const int n = 2;
    auto g = Grid::make1d(256, 8.0);
    auto u0 = harmonic_gaussian(n, 1, 0.0, 0.0, g);
    QuadraticPotential V(1, TimeCoefficient::constant(n * n));
    NonlinearitySpec lin;
    DiagnosticsSelection sel;
    sel.lq_nl = true;  // sigma=1: records ||u||_4
    StepControls c;
    c.dt = 1e-3;
    c.snapshot_stride = 10;
    auto tr = strang_propagate(u0, V, lin, 0.0, 1.0, c, sel);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(mixed_norm(tr, inf, 2.0) ==
          doctest::Approx(tr.records.front().mass).epsilon(1e-10));
    const double expect = std::pow(2 * M_PI / (4.0 * n), 1.0 / 8);
    CHECK(mixed_norm(tr, 8.0, 4.0) == doctest::Approx(expect).epsilon(1e-6));
    CHECK_THROWS_AS(mixed_norm(tr, 8.0, 6.0), Error);  // q=6 not recorded
}

TEST_CASE("csv export is deterministic") {
    auto g = Grid::make1d(128, 8.0);
    auto u0 = gaussian_field(g, {0.2, 0, 0}, {1, 1, 1}, {0, 0, 0});
    QuadraticPotential V(1, TimeCoefficient::named("cosine"));
    NonlinearitySpec nl;
    nl.lambda = 0.5;
    DiagnosticsSelection sel;
    sel.virial = true;
    StepControls c;
    c.dt = 1e-3;
    c.snapshot_stride = 20;
    auto read = [](const std::string& p) {
        std::ifstream f(p);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    auto t1 = strang_propagate(u0, V, nl, 0.0, 0.3, c, sel);
    t1.write_csv("/tmp/nlsq_trace_a.csv");
    auto t2 = strang_propagate(u0, V, nl, 0.0, 0.3, c, sel);
    t2.write_csv("/tmp/nlsq_trace_b.csv");
    CHECK(read("/tmp/nlsq_trace_a.csv") == read("/tmp/nlsq_trace_b.csv"));
    CHECK(read("/tmp/nlsq_trace_a.csv").find("t,mass,grad") == 0);
}
