#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "nlsq/fft.hpp"
#include "nlsq/field_ops.hpp"
#include "nlsq/fundamental_pair.hpp"

using namespace nlsq;

namespace {

const double kSqrtPi = std::sqrt(M_PI);

WaveField unit_gaussian_1d(int n = 256, double L = 8.0) {
    return gaussian_field(Grid::make1d(n, L), {0, 0, 0}, {1, 1, 1}, {0, 0, 0});
}

}  // namespace

TEST_CASE("grid validation and geometry") {
    CHECK_THROWS_AS(Grid::make(1, {12, 1, 1}, {1.0, 0, 0}), ConfigError);
    CHECK_THROWS_AS(Grid::make(1, {4, 1, 1}, {1.0, 0, 0}), ConfigError);
    CHECK_THROWS_AS(Grid::make(2, {16, 16, 1}, {1.0, -1.0, 0}), ConfigError);
    CHECK_THROWS_AS(Grid::make(4, {16, 16, 16}, {1, 1, 1}), ConfigError);

    auto g = Grid::make1d(16, 2.0);
    CHECK(g.spacing(0) == doctest::Approx(0.25));
    CHECK(g.coord(0, 0) == doctest::Approx(-2.0));
    CHECK(g.coord(0, 15) == doctest::Approx(1.75));
    CHECK(g.wavenumber(0, 1) == doctest::Approx(M_PI / 2.0));
    CHECK(g.wavenumber(0, 15) == doctest::Approx(-M_PI / 2.0));
    CHECK(g.wavenumber(0, 8) == doctest::Approx(-8 * M_PI / 2.0));
    CHECK(g.nyquist(0) == doctest::Approx(8 * M_PI / 2.0));
}

TEST_CASE("lq norms: constant field and gaussians") {
    for (int d = 1; d <= 3; ++d) {
        std::array<int, 3> n{32, 32, 32};
        std::array<double, 3> L{1.0, 1.0, 1.0};
        WaveField u(Grid::make(d, n, L));
        for (auto& v : u.values) v = 1.0;
        CHECK(lq_norm(u, 2.0) == doctest::Approx(std::pow(2.0, d / 2.0)).epsilon(1e-13));
    }
    // normalized gaussian has unit L2 norm for L >= 8
    for (int d = 1; d <= 2; ++d) {
        std::array<int, 3> n{128, 128, 1};
        std::array<double, 3> L{8.0, 8.0, 0.0};
        auto u = gaussian_field(Grid::make(d, n, L), {0, 0, 0}, {1, 1, 1}, {0, 0, 0},
                                1.0 / std::pow(M_PI, d / 4.0));
        CHECK(lq_norm(u, 2.0) == doctest::Approx(1.0).epsilon(1e-10));
    }
    auto u = unit_gaussian_1d();
    CHECK(lq_norm(u, std::numeric_limits<double>::infinity()) == doctest::Approx(1.0));
    CHECK_THROWS_AS(lq_norm(u, 0.5), ConfigError);
}

TEST_CASE("gauge-phase transparency of lq_norm") {
    auto u = unit_gaussian_1d();
    WaveField v = u;
    for (std::size_t i = 0; i < v.values.size(); ++i)
        v[i] *= std::polar(1.0, 0.3 * i + std::sin(0.01 * i));
    for (double q : {1.0, 2.0, 4.0, 6.0})
        CHECK(lq_norm(u, q) == doctest::Approx(lq_norm(v, q)).epsilon(1e-14));
}

TEST_CASE("parseval identity") {
    auto u = gaussian_field(Grid::make1d(512, 10.0), {0.3, 0, 0}, {0.8, 1, 1}, {2.0, 0, 0});
    WaveField w = u;
    fft::forward(w);
    double spec = 0.0;
    for (const cplx& v : w.values) spec += std::norm(v);
    spec *= w.grid.cell_volume() / static_cast<double>(w.grid.size());
    const double phys = l2_norm(u) * l2_norm(u);
    CHECK(spec == doctest::Approx(phys).epsilon(1e-12));
}

TEST_CASE("sobolev and momentum norms against gaussian moments") {
    auto u = unit_gaussian_1d(512, 10.0);
    // ||u||^2 = sqrt(pi); ||u'||^2 = sqrt(pi)/2; ||u''||^2 = (3/4) sqrt(pi)
    CHECK(sobolev_norm(u, 0) == doctest::Approx(lq_norm(u, 2.0)).epsilon(1e-12));
    CHECK(momentum_norm(u, 0) == doctest::Approx(lq_norm(u, 2.0)).epsilon(1e-12));
    CHECK(sobolev_norm(u, 1) ==
          doctest::Approx(std::sqrt(kSqrtPi * 1.5)).epsilon(1e-10));
    CHECK(sobolev_norm(u, 2) ==
          doctest::Approx(std::sqrt(kSqrtPi * (1.0 + 0.5 + 0.75))).epsilon(1e-10));
    // momenta: ||x u||^2 = sqrt(pi)/2, ||x^2 u||^2 = (3/4) sqrt(pi)
    CHECK(momentum_norm(u, 1) == doctest::Approx(std::sqrt(kSqrtPi * 1.5)).epsilon(1e-10));
    CHECK(momentum_norm(u, 2) ==
          doctest::Approx(std::sqrt(kSqrtPi * (1.0 + 0.5 + 0.75))).epsilon(1e-10));

    // plane-wave modulation raises sobolev, leaves momenta unchanged
    auto mod = gaussian_field(Grid::make1d(512, 10.0), {0, 0, 0}, {1, 1, 1}, {3.0, 0, 0});
    CHECK(sobolev_norm(mod, 1) > 2.0 * sobolev_norm(u, 1));
    CHECK(momentum_norm(mod, 2) == doctest::Approx(momentum_norm(u, 2)).epsilon(1e-12));

    CHECK_THROWS_AS(sobolev_norm(u, 9), ConfigError);
}

TEST_CASE("spectral derivative matches analytic gaussian derivative") {
    auto u = unit_gaussian_1d(256, 8.0);
    auto d = derivative(u, 0);
    const Grid& g = u.grid;
    for (int i = 0; i < g.points(0); i += 7) {
        const double x = g.coord(0, i);
        CHECK(d[i].real() == doctest::Approx(-x * std::exp(-x * x / 2)).epsilon(1e-9).scale(1.0));
        CHECK(std::abs(d[i].imag()) < 1e-10);
    }
    CHECK(grad_norm(u) == doctest::Approx(std::sqrt(kSqrtPi / 2)).epsilon(1e-10));
}

TEST_CASE("vector fields: Omega=0 reduces to x and i d/dx, then Galilean") {
    auto pair = solve_fundamental(TimeCoefficient::constant(0.0), 0.0, 2.0, 1e-12);
    auto u0 = unit_gaussian_1d();

    // at t=0 the initial data force A = x, B = i d/dx
    WaveField a0 = apply_vector_field(u0, pair, VectorFieldKind::A, 0, 0.0);
    WaveField b0 = apply_vector_field(u0, pair, VectorFieldKind::B, 0, 0.0);
    auto du = derivative(u0, 0);
    const Grid& g = u0.grid;
    for (int i = 0; i < g.points(0); i += 13) {
        const double x = g.coord(0, i);
        CHECK(std::abs(a0[i] - x * u0[i]) < 1e-12);
        CHECK(std::abs(b0[i] - cplx(0, 1) * du[i]) < 1e-12);
    }

    // general t: A = x + i t d/dx (Galilean operator)
    const double t = 0.75;
    WaveField ut = u0;
    ut.time = t;
    WaveField at = apply_vector_field(ut, pair, VectorFieldKind::A, 0, t);
    auto dut = derivative(ut, 0);
    for (int i = 0; i < g.points(0); i += 13) {
        const double x = g.coord(0, i);
        CHECK(std::abs(at[i] - (x * ut[i] + cplx(0, t) * dut[i])) < 1e-11);
    }

    CHECK_THROWS_AS(apply_vector_field(u0, pair, VectorFieldKind::A, 0, 0.5), Error);
}

TEST_CASE("Eq.(inv)-style reconstruction from A and B") {
    // x_j u = nu (A_j u) - mu (B_j u); i d_j u = -nu_dot (A_j u) + mu_dot (B_j u)
    auto pair = solve_fundamental(TimeCoefficient::named("cosine"), 0.0, 1.0, 1e-12);
    const double t = 0.7;
    auto u = gaussian_field(Grid::make1d(256, 8.0), {0.4, 0, 0}, {0.9, 1, 1}, {1.5, 0, 0},
                            1.0, t);
    const PairState st = pair.eval(t);
    WaveField au = apply_vector_field(u, pair, VectorFieldKind::A, 0, t);
    WaveField bu = apply_vector_field(u, pair, VectorFieldKind::B, 0, t);
    auto du = derivative(u, 0);
    const Grid& g = u.grid;
    double num = 0.0, den = 0.0, num2 = 0.0, den2 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.coord(0, static_cast<int>(i));
        num += std::norm(st.nu * au[i] - st.mu * bu[i] - x * u[i]);
        den += std::norm(x * u[i]);
        num2 += std::norm(-st.nu_dot * au[i] + st.mu_dot * bu[i] - cplx(0, 1) * du[i]);
        den2 += std::norm(du[i]);
    }
    CHECK(std::sqrt(num / den) < 1e-9);
    CHECK(std::sqrt(num2 / den2) < 1e-9);
}

TEST_CASE("scaled_ft_axis equals the direct quadratic-exponent sum") {
    const int N = 16;
    auto g = Grid::make1d(N, 1.0);
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double theta : {0.3, -1.7, 2.0 * M_PI / N}) {
        std::vector<cplx> in(N);
        for (auto& v : in) v = cplx(dist(rng), dist(rng));
        std::vector<cplx> data = in;
        fft::scaled_ft_axis(g, data.data(), 0, theta);
        for (int m = 0; m < N; ++m) {
            cplx ref(0, 0);
            for (int n = 0; n < N; ++n)
                ref += in[n] * std::polar(1.0, -theta * (m - N / 2) * (n - N / 2));
            CHECK(std::abs(data[m] - ref) < 1e-12);
        }
    }
}

TEST_CASE("snapshot io round trip preserves bits and header layout") {
    auto u = gaussian_field(Grid::make(2, {32, 16, 1}, {4.0, 2.0, 0}), {0.1, -0.2, 0},
                            {1.0, 0.7, 1}, {0.5, 0, 0}, 1.3, 2.25);
    const std::string path = "/tmp/nlsq_test_snapshot.wfld";
    write_snapshot(u, path);
    auto v = read_snapshot(path);
    CHECK(v.grid == u.grid);
    CHECK(v.time == u.time);
    REQUIRE(v.values.size() == u.values.size());
    for (std::size_t i = 0; i < u.values.size(); ++i) CHECK(v.values[i] == u.values[i]);

    // 32-byte header + d*8 half-widths + 8 time + 16*size payload
    std::FILE* f = std::fopen(path.c_str(), "rb");
    REQUIRE(f);
    std::fseek(f, 0, SEEK_END);
    const long sz = std::ftell(f);
    std::fclose(f);
    CHECK(sz == 32 + 2 * 8 + 8 + static_cast<long>(16 * u.values.size()));

    CHECK_THROWS_AS(read_snapshot("/tmp/definitely_missing.wfld"), Error);
}

TEST_CASE("boundary shell mass and variance") {
    auto u = unit_gaussian_1d(256, 8.0);
    CHECK(boundary_shell_mass_fraction(u) < 1e-12);
    // y = int x^2 e^{-x^2} = sqrt(pi)/2
    CHECK(variance(u) == doctest::Approx(kSqrtPi / 2).epsilon(1e-10));
    CHECK(std::abs(variance_rate(u)) < 1e-10);
    // displaced with momentum p: rate = 2 p int x |u|^2 = 2 p c * mass
    auto w = gaussian_field(Grid::make1d(256, 8.0), {1.0, 0, 0}, {1, 1, 1}, {2.0, 0, 0});
    const double mass = l2_norm(w) * l2_norm(w);
    CHECK(variance_rate(w) == doctest::Approx(2.0 * 2.0 * 1.0 * mass).epsilon(1e-9));
}
