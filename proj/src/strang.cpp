#include "nlsq/strang.hpp"

#include <cmath>
#include <iostream>

#include "nlsq/fft.hpp"

namespace nlsq {

namespace {

// |u|^{2 sigma} for sigma in {1, 2}
inline double mod2s(const cplx& v, int sigma) {
    const double m2 = std::norm(v);
    return (sigma == 1) ? m2 : m2 * m2;
}

}  // namespace

SolutionTrace strang_propagate(const WaveField& u0, const PotentialSampler& V,
                               const NonlinearitySpec& nl, double s, double t_end,
                               const StepControls& controls, const DiagnosticsSelection& sel,
                               const FundamentalPair* pair) {
    const Grid& g = u0.grid;
    nl.validate(g.dim());
    if (!(controls.dt > 0.0)) throw ConfigError("strang_propagate: dt must be > 0");
    if (std::abs(u0.time - s) > 1e-12 * (1.0 + std::abs(s)))
        throw Error("strang_propagate: field time tag does not match s");

    SolutionTrace trace;
    trace.dim = g.dim();
    trace.nl = nl;
    trace.dt = controls.dt;
    trace.stride = std::max(1, controls.snapshot_stride);
    trace.potential_is_zero = V.is_zero();
    trace.selection = sel;

    const long n_steps = (t_end == s) ? 0 : std::max<long>(1, std::llround(std::abs(t_end - s) / controls.dt));
    const double dt = (t_end == s) ? 0.0 : (t_end - s) / static_cast<double>(n_steps);

    // kinetic multiplier e^{-i dt k^2 / 2}
    std::vector<cplx> kmul(g.size());
    g.for_each([&](std::size_t idx, int i0, int i1, int i2) {
        const int ii[3] = {i0, i1, i2};
        double k2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            const double k = g.wavenumber(a, ii[a]);
            k2 += k * k;
        }
        kmul[idx] = std::polar(1.0, -0.5 * dt * k2);
    });

    WaveField u = u0;
    std::vector<double> vbuf(g.size(), 0.0);
    const bool have_v = !V.is_zero();
    bool phase_warned = false;

    auto record_at = [&](const WaveField& w, double t) {
        trace.records.push_back(compute_record(w, t, V, nl, pair, sel));
        if (controls.keep_fields) trace.snapshots.push_back(w);
    };

    auto check_state = [&](const WaveField& w, double t) -> bool {
        const DiagnosticsRecord& r = trace.records.back();
        if (!std::isfinite(r.mass) || !w.all_finite()) {
            trace.status = RunStatus::AbortedNonFinite;
            trace.abort_message = "non-finite field at t=" + std::to_string(t);
            return false;
        }
        if (r.boundary_mass > controls.boundary_mass_cap) {
            trace.status = RunStatus::AbortedBoundaryMass;
            trace.abort_message = "boundary mass " + std::to_string(r.boundary_mass) +
                                  " exceeded cap at t=" + std::to_string(t);
            return false;
        }
        if (controls.gradient_cap > 0.0 && r.grad > controls.gradient_cap) {
            trace.status = RunStatus::AbortedGradientCap;
            trace.abort_message = "||grad u|| = " + std::to_string(r.grad) +
                                  " exceeded cap at t=" + std::to_string(t);
            return false;
        }
        return true;
    };

    record_at(u, s);
    if (!check_state(u, s)) {
        trace.final_field = u;
        return trace;
    }

    for (long n = 0; n < n_steps; ++n) {
        const double t = s + static_cast<double>(n) * dt;
        const double tm = t + 0.5 * dt;  // midpoint sampling of V and h
        const double coup = nl.coupling(tm);

        if (have_v) {
            V.fill(tm, g, vbuf.data());
            if (!phase_warned) {
                double vmax = 0.0;
                for (double v : vbuf) vmax = std::max(vmax, std::abs(v));
                if (vmax * std::abs(dt) > 0.5) {
                    std::cerr << "[nlsq] warning: potential phase per step is "
                              << vmax * std::abs(dt) << " rad at the domain edge; dt may be too coarse\n";
                    phase_warned = true;
                }
            }
        }

        const double half = 0.5 * dt;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double w = (have_v ? vbuf[i] : 0.0) + coup * mod2s(u[i], nl.sigma);
            u[i] *= std::polar(1.0, -half * w);
        }
        fft::forward(u);
        for (std::size_t i = 0; i < g.size(); ++i) u[i] *= kmul[i];
        fft::inverse(u);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double w = (have_v ? vbuf[i] : 0.0) + coup * mod2s(u[i], nl.sigma);
            u[i] *= std::polar(1.0, -half * w);
        }
        u.time = t + dt;

        if ((n + 1) % trace.stride == 0 || n + 1 == n_steps) {
            record_at(u, u.time);
            if (!check_state(u, u.time)) break;
        }
    }
    trace.final_field = u;
    return trace;
}

}  // namespace nlsq
