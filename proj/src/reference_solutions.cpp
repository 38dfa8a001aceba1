#include "nlsq/reference_solutions.hpp"

#include <cmath>
#include <cstdio>

#include "nlsq/fft.hpp"
#include "nlsq/field_ops.hpp"

namespace nlsq {

WaveField blowup_solution(const GroundState& Q, const FundamentalPair& pair, double t,
                          const Grid& grid) {
    if (Q.dim() != grid.dim()) throw Error("blowup_solution: dimension mismatch");
    const PairState st = pair.eval(t);
    if (!(st.mu > 0.0)) throw Error("blowup_solution: mu(t) <= 0 at t=" + std::to_string(t));
    const double amp = std::pow(st.mu, -0.5 * grid.dim());
    const double chirp = st.mu_dot / st.mu;
    const double phase0 = -st.nu / st.mu;
    WaveField u(grid, t);
    grid.for_each([&](std::size_t idx, int i0, int i1, int i2) {
        const int ii[3] = {i0, i1, i2};
        double r2 = 0.0;
        for (int a = 0; a < grid.dim(); ++a) {
            const double x = grid.coord(a, ii[a]);
            r2 += x * x;
        }
        u[idx] = amp * Q.eval(std::sqrt(r2) / st.mu) *
                 std::polar(1.0, 0.5 * chirp * r2 + phase0);
    });
    return u;
}

WaveField harmonic_gaussian(int n, int d, double t, double t_n, const Grid& grid) {
    if (n < 1) throw ConfigError("harmonic_gaussian: n >= 1 required");
    if (grid.dim() != d) throw Error("harmonic_gaussian: dimension mismatch");
    const cplx phase = std::polar(1.0, -0.5 * n * d * (t - t_n));
    WaveField u(grid, t);
    grid.for_each([&](std::size_t idx, int i0, int i1, int i2) {
        const int ii[3] = {i0, i1, i2};
        double r2 = 0.0;
        for (int a = 0; a < d; ++a) {
            const double x = grid.coord(a, ii[a]);
            r2 += x * x;
        }
        u[idx] = phase * std::exp(-0.5 * n * r2);
    });
    return u;
}

namespace {

struct FlowResult {
    WaveField psi;
    double multiplier;
    double residual;
};

// minimize E on the sphere ||psi||^2 = mass; returns the converged state
FlowResult constrained_flow(WaveField psi, double mass, double lambda, int sigma,
                            double tol, int max_iter) {
    const Grid& g = psi.grid;
    const double vol = g.cell_volume();

    std::vector<double> vx(g.size());
    g.for_each([&](std::size_t idx, int i0, int i1, int i2) {
        const int ii[3] = {i0, i1, i2};
        double r2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            const double x = g.coord(a, ii[a]);
            r2 += x * x;
        }
        vx[idx] = 0.5 * r2;
    });
    std::vector<double> k2(g.size());
    g.for_each([&](std::size_t idx, int i0, int i1, int i2) {
        const int ii[3] = {i0, i1, i2};
        double s = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            const double k = g.wavenumber(a, ii[a]);
            s += k * k;
        }
        k2[idx] = s;
    });

    auto normalize = [&](WaveField& w) {
        double m = 0.0;
        for (const cplx& v : w.values) m += std::norm(v);
        m *= vol;
        const double f = std::sqrt(mass / m);
        for (cplx& v : w.values) v *= f;
    };
    auto energy_of = [&](const WaveField& w) {
        WaveField wk = w;
        fft::forward(wk);
        double kin = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) kin += k2[i] * std::norm(wk[i]);
        kin *= 0.5 * vol / static_cast<double>(g.size());
        double pot = 0.0, nlv = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double m2 = std::norm(w[i]);
            pot += vx[i] * m2;
            nlv += std::pow(m2, sigma + 1);
        }
        return kin + pot * vol + lambda / (sigma + 1.0) * nlv * vol;
    };

    normalize(psi);
    double E = energy_of(psi);
    FlowResult best{psi, 0.0, 1e300};
    // Backtracking on the energy drives the flow down to the double-precision
    // energy floor; below that the residual is polished by fixed-step
    // preconditioned iteration at the last stable step size.
    bool polish = false;
    double tau_last = 1.0, rn_prev = 1e300;
    int no_progress = 0, streak = 0;
    for (int it = 0; it < max_iter; ++it) {
        // gradient g = H psi + lambda |psi|^{2s} psi
        WaveField hk = psi;
        fft::forward(hk);
        for (std::size_t i = 0; i < g.size(); ++i) hk[i] *= 0.5 * k2[i];
        fft::inverse(hk);
        WaveField grad(g);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double m2 = std::norm(psi[i]);
            const double nlw = (sigma == 1) ? m2 : m2 * m2;
            grad[i] = hk[i] + (vx[i] + lambda * nlw) * psi[i];
        }
        double mu_num = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            mu_num += std::real(std::conj(grad[i]) * psi[i]);
        const double mu = mu_num * vol / mass;

        WaveField resid(g);
        double rn = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            resid[i] = grad[i] - mu * psi[i];
            rn += std::norm(resid[i]);
        }
        rn = std::sqrt(rn * vol);
        if (rn < best.residual) {
            best.psi = psi;
            best.multiplier = mu;
            best.residual = rn;
            no_progress = 0;
        } else {
            ++no_progress;
        }
        if (best.residual <= tol) return best;
        if (polish && no_progress > 1000) break;

        // preconditioned direction
        WaveField dir = resid;
        fft::forward(dir);
        const double shift = std::max(1.0, std::abs(mu));
        for (std::size_t i = 0; i < g.size(); ++i) dir[i] /= (shift + 0.5 * k2[i]);
        fft::inverse(dir);

        if (!polish) {
            double tau = std::min(1.0, 4.0 * tau_last);
            bool accepted = false;
            for (int bt = 0; bt < 40; ++bt) {
                WaveField trial = psi;
                for (std::size_t i = 0; i < g.size(); ++i) trial[i] -= tau * dir[i];
                normalize(trial);
                const double Et = energy_of(trial);
                if (Et < E) {
                    psi = std::move(trial);
                    E = Et;
                    tau_last = tau;
                    accepted = true;
                    break;
                }
                tau *= 0.5;
            }
            if (!accepted) polish = true;  // energy floor reached
        } else {
            // fixed-point refinement with residual-driven step adaptation
            if (rn > rn_prev) {
                tau_last *= 0.5;
                streak = 0;
            } else if (++streak >= 25) {
                tau_last = std::min(1.0, 1.3 * tau_last);
                streak = 0;
            }
            rn_prev = rn;
            for (std::size_t i = 0; i < g.size(); ++i) psi[i] -= tau_last * dir[i];
            normalize(psi);
        }
    }
    if (best.residual <= 10.0 * tol) return best;
    char msg[96];
    std::snprintf(msg, sizeof(msg), "nonlinear_stationary: flow stagnation at residual %.3e",
                  best.residual);
    throw NumericsError(msg);
}

}  // namespace

StationaryState nonlinear_stationary(double omega, double lambda, int sigma, int d,
                                     const Grid& grid, double tol) {
    if (sigma != 1 && sigma != 2) throw ConfigError("nonlinear_stationary: sigma must be 1 or 2");
    if (grid.dim() != d) throw Error("nonlinear_stationary: dimension mismatch");
    const double omega0 = 0.5 * d;  // lowest harmonic eigenvalue

    if (lambda == 0.0) {
        if (std::abs(omega - omega0) > 1e-9)
            throw ConfigError("nonlinear_stationary: lambda=0 admits only omega = d/2");
        WaveField psi = gaussian_field(grid, {0, 0, 0}, {1, 1, 1}, {0, 0, 0},
                                       std::pow(M_PI, -0.25 * d));
        StationaryState st;
        st.psi = psi;
        st.omega = omega0;
        st.mass = std::pow(l2_norm(psi), 2);
        st.residual = 0.0;
        return st;
    }
    if (lambda > 0.0 && !(omega > omega0))
        throw ConfigError("nonlinear_stationary: lambda > 0 requires omega > d/2");
    if (lambda < 0.0 && !(omega < omega0))
        throw ConfigError("nonlinear_stationary: lambda < 0 requires omega < d/2");

    const double flow_tol = std::min(tol, 1e-8);
    auto seed = [&](double mass) {
        return gaussian_field(grid, {0, 0, 0}, {1, 1, 1}, {0, 0, 0},
                              std::sqrt(mass) * std::pow(M_PI, -0.25 * d));
    };
    auto multiplier_at = [&](double mass) {
        return constrained_flow(seed(mass), mass, lambda, sigma, flow_tol, 200000);
    };

    // bracket the mass: multiplier is monotone in the mass within each regime
    double m_lo = 1e-4, m_hi = 1.0;
    FlowResult f_hi = multiplier_at(m_hi);
    const double sgn = (lambda > 0.0) ? 1.0 : -1.0;  // multiplier grows/falls with mass
    int guard = 0;
    while (sgn * (f_hi.multiplier - omega) < 0.0) {
        m_hi *= 2.0;
        f_hi = multiplier_at(m_hi);
        if (++guard > 40) throw NumericsError("nonlinear_stationary: cannot bracket omega (hi)");
    }
    FlowResult f_lo = multiplier_at(m_lo);
    guard = 0;
    while (sgn * (f_lo.multiplier - omega) > 0.0) {
        m_lo *= 0.25;
        f_lo = multiplier_at(m_lo);
        if (++guard > 40) throw NumericsError("nonlinear_stationary: cannot bracket omega (lo)");
    }

    FlowResult best = f_hi;
    for (int it = 0; it < 60; ++it) {
        const double m = std::sqrt(m_lo * m_hi);
        FlowResult f = multiplier_at(m);
        best = f;
        if (std::abs(f.multiplier - omega) < 1e-10 * std::max(1.0, std::abs(omega))) break;
        if (sgn * (f.multiplier - omega) > 0.0)
            m_hi = m;
        else
            m_lo = m;
        if (m_hi / m_lo < 1.0 + 1e-14) break;
    }

    StationaryState st;
    st.psi = best.psi;
    st.psi.time = 0.0;
    st.omega = best.multiplier;
    st.mass = std::pow(l2_norm(best.psi), 2);
    st.residual = best.residual;
    if (std::abs(st.omega - omega) > 1e-6 * std::max(1.0, std::abs(omega)))
        throw NumericsError("nonlinear_stationary: could not match requested omega");
    return st;
}

}  // namespace nlsq
