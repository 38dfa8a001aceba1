#include "nlsq/mehler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlsq/fft.hpp"

namespace nlsq {

namespace {

// First time in (a, b] (in integration direction) where some axis crosses a
// zero of mu (Maslov branch jump) or of mu_dot (gamma validity ends). NaN when
// the span is clean. Endpoint caustic-band violations are caught separately by
// mehler_coefficients.
double first_singular_time(const std::vector<FundamentalPair>& pairs, double a, double b) {
    const double dir = (b >= a) ? 1.0 : -1.0;
    const double eps = 1e-9 * (1.0 + std::abs(a));
    std::vector<double> hits;
    for (const auto& p : pairs) {
        for (double tz : caustic_times(p, std::min(a, b), std::max(a, b))) hits.push_back(tz);
        if (!std::isnan(p.mu_dot_crossing())) hits.push_back(p.mu_dot_crossing());
    }
    double best = std::numeric_limits<double>::quiet_NaN();
    for (double h : hits) {
        if ((h - a) * dir <= eps || (h - b) * dir > 0.0) continue;
        if (std::isnan(best) || (h - best) * dir < 0.0) best = h;
    }
    return best;
}

}  // namespace

WaveField mehler_apply(const WaveField& u0, const std::vector<FundamentalPair>& pairs,
                       double s, double t) {
    const Grid& g = u0.grid;
    if (static_cast<int>(pairs.size()) != g.dim())
        throw Error("mehler_apply: need one fundamental pair per axis");
    if (std::abs(u0.time - s) > 1e-12 * (1.0 + std::abs(s)))
        throw Error("mehler_apply: field time tag does not match s");
    if (t == s) {
        WaveField out = u0;
        return out;
    }

    // per-axis coefficients; mehler_coefficients enforces the caustic band
    // and gamma availability
    std::vector<MehlerCoefficients> mc;
    mc.reserve(pairs.size());
    for (const auto& p : pairs) mc.push_back(mehler_coefficients(p, t));

    // chirp resolution refusal: |gamma_j| L_j and L_j/|mu_j| must stay below
    // the Nyquist wavenumber of axis j
    for (int a = 0; a < g.dim(); ++a) {
        const double L = g.half_width(a);
        const double kmax = g.nyquist(a);
        if (std::abs(mc[a].gamma) * L > kmax)
            throw Error("mehler_apply: quadratic phase gamma exceeds Nyquist on axis " +
                        std::to_string(a) + " (refine grid or shorten leg)");
        if (L / std::abs(mc[a].state.mu) > kmax)
            throw CausticError("mehler_apply: 1/mu scale exceeds Nyquist on axis " +
                               std::to_string(a));
    }

    WaveField out = u0;
    // multiply by e^{(i/2) sum gamma_j y_j^2}
    g.for_each([&](std::size_t idx, int i0, int i1, int i2) {
        const int ii[3] = {i0, i1, i2};
        double ph = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            const double y = g.coord(a, ii[a]);
            ph += 0.5 * mc[a].gamma * y * y;
        }
        out[idx] *= std::polar(1.0, ph);
    });

    // scaled transform along each axis: G(x_j / mu_j) = h_j * sum_n e^{-i x_m y_n / mu_j} ..
    // with x_m y_n / mu = theta (m - N/2)(n - N/2), theta = h^2 / mu
    cplx pref(1.0, 0.0);
    for (int a = 0; a < g.dim(); ++a) {
        const double h = g.spacing(a);
        fft::scaled_ft_axis(g, out.values.data(), a, h * h / mc[a].state.mu);
        pref *= mc[a].prefactor * h;
    }

    // multiply by prefactor and e^{(i/2) sum alpha_j x_j^2}
    g.for_each([&](std::size_t idx, int i0, int i1, int i2) {
        const int ii[3] = {i0, i1, i2};
        double ph = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            const double x = g.coord(a, ii[a]);
            ph += 0.5 * mc[a].alpha * x * x;
        }
        out[idx] *= pref * std::polar(1.0, ph);
    });
    out.time = t;
    return out;
}

WaveField mehler_compose(const WaveField& u0, const std::vector<TimeCoefficient>& omega,
                         double s, double t, double rtol, const std::vector<double>* waypoints) {
    const Grid& g = u0.grid;
    if (static_cast<int>(omega.size()) != g.dim())
        throw Error("mehler_compose: need one Omega per axis");
    if (t == s) return u0;

    WaveField u = u0;
    if (waypoints) {
        double cur = s;
        for (double w : *waypoints) {
            auto pairs = solve_fundamental(omega, cur, w, rtol);
            u = mehler_apply(u, pairs, cur, w);
            cur = w;
        }
        auto pairs = solve_fundamental(omega, cur, t, rtol);
        return mehler_apply(u, pairs, cur, t);
    }

    double cur = s;
    constexpr int kMaxLegs = 64;
    for (int leg = 0; leg < kMaxLegs; ++leg) {
        auto pairs = solve_fundamental(omega, cur, t, rtol);
        const double bad = first_singular_time(pairs, cur, t);
        if (std::isnan(bad)) return mehler_apply(u, pairs, cur, t);
        // stop short of the singular time, keeping a safety margin
        const double next = cur + 0.75 * (bad - cur);
        if (std::abs(next - cur) < 1e-10 * (1.0 + std::abs(cur)))
            throw Error("mehler_compose: cannot find caustic-free legs near t=" +
                        std::to_string(cur));
        auto leg_pairs = solve_fundamental(omega, cur, next, rtol);
        u = mehler_apply(u, leg_pairs, cur, next);
        cur = next;
    }
    throw Error("mehler_compose: leg budget exhausted (degenerate Omega?)");
}

}  // namespace nlsq
