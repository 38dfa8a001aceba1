#include "nlsq/avron_herbst.hpp"

#include <cmath>

#include "nlsq/fft.hpp"
#include "nlsq/ode.hpp"

namespace nlsq {

AvronHerbstPhases avron_herbst_phases(const std::vector<TimeCoefficient>& efield, double t,
                                      double rtol) {
    const std::size_t d = efield.size();
    if (d < 1 || d > 3) throw ConfigError("avron_herbst: E must have 1..3 components");
    AvronHerbstPhases out;
    if (t == 0.0) return out;
    // state: P_j = int E_j, S_j = int P_j, W = int |P|^2
    OdeRhs rhs = [&efield, d](double tt, const OdeState& y, OdeState& dy) {
        double w = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double e = efield[j].value(tt);
            dy[j] = e;
            dy[d + j] = y[j];
            w += y[j] * y[j];
        }
        dy[2 * d] = w;
    };
    OdeOptions opts;
    opts.rtol = rtol;
    opts.atol = rtol * 1e-2;
    OdeState y0{};
    auto sol = integrate_dopri5(rhs, 2 * d + 1, 0.0, t, y0, opts);
    OdeState y{};
    sol.eval(t, y);
    for (std::size_t j = 0; j < d; ++j) {
        out.momentum[j] = y[j];
        out.shift[j] = y[d + j];
    }
    out.action = y[2 * d];
    return out;
}

WaveField avron_herbst(const WaveField& v_at_t, const std::vector<TimeCoefficient>& efield,
                       double t, const Grid& grid) {
    if (!(v_at_t.grid == grid)) throw Error("avron_herbst: grid mismatch");
    if (std::abs(v_at_t.time - t) > 1e-12 * (1.0 + std::abs(t)))
        throw Error("avron_herbst: field time tag does not match t");
    if (static_cast<int>(efield.size()) != grid.dim())
        throw Error("avron_herbst: need one E component per axis");

    const AvronHerbstPhases ph = avron_herbst_phases(efield, t);

    // v(x + shift) by Fourier translation
    WaveField u = v_at_t;
    fft::forward(u);
    grid.for_each([&](std::size_t idx, int i0, int i1, int i2) {
        const int ii[3] = {i0, i1, i2};
        double ks = 0.0;
        for (int a = 0; a < grid.dim(); ++a) ks += grid.wavenumber(a, ii[a]) * ph.shift[a];
        u[idx] *= std::polar(1.0, ks);
    });
    fft::inverse(u);

    grid.for_each([&](std::size_t idx, int i0, int i1, int i2) {
        const int ii[3] = {i0, i1, i2};
        double xp = 0.0;
        for (int a = 0; a < grid.dim(); ++a) xp += grid.coord(a, ii[a]) * ph.momentum[a];
        u[idx] *= std::polar(1.0, -xp - 0.5 * ph.action);
    });
    return u;
}

}  // namespace nlsq
