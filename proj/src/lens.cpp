#include "nlsq/lens.hpp"

#include <algorithm>
#include <cmath>

#include "nlsq/fft.hpp"

namespace nlsq {

namespace {

// first zero of nu on [0, t_end] in integration direction, NaN if none
double first_nu_zero(const FundamentalPair& p, double t_end) {
    const double dir = (t_end >= 0.0) ? 1.0 : -1.0;
    double prev_t = 0.0, prev_nu = 1.0;
    const int steps = 4096;
    for (int i = 1; i <= steps; ++i) {
        const double t = t_end * (static_cast<double>(i) / steps);
        const double nu = p.nu(t);
        if ((prev_nu > 0.0) != (nu > 0.0)) {
            double a = prev_t, b = t;
            for (int it = 0; it < 100; ++it) {
                const double m = 0.5 * (a + b);
                if ((p.nu(m) > 0.0) == (prev_nu > 0.0))
                    a = m;
                else
                    b = m;
            }
            return 0.5 * (a + b);
        }
        prev_t = t;
        prev_nu = nu;
        (void)dir;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

// pchip (Fritsch-Carlson) slopes for strictly increasing x
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> d(n - 1), m(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0.0) {
            m[i] = 0.0;
        } else {
            const double w1 = 2.0 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
            const double w2 = (x[i + 1] - x[i]) + 2.0 * (x[i] - x[i - 1]);
            m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    return m;
}

}  // namespace

LensFrame LensFrame::build(const TimeCoefficient& omega, double t_min, double t_max,
                           double rtol) {
    if (!(t_min <= 0.0 && 0.0 <= t_max) || t_min == t_max)
        throw ConfigError("LensFrame: need t_min <= 0 <= t_max with a nonempty window");
    LensFrame f;
    f.fwd_ = solve_fundamental(omega, 0.0, std::max(t_max, 1e-6), rtol);
    f.t_max_ = t_max;
    const double z_fwd = first_nu_zero(f.fwd_, f.fwd_.t_end());
    if (!std::isnan(z_fwd)) f.t_max_ = std::min(f.t_max_, z_fwd - 1e-9 * (1.0 + std::abs(z_fwd)));
    if (t_min < 0.0) {
        f.bwd_ = solve_fundamental(omega, 0.0, t_min, rtol);
        f.has_bwd_ = true;
        f.t_min_ = t_min;
        const double z_bwd = first_nu_zero(f.bwd_, t_min);
        if (!std::isnan(z_bwd))
            f.t_min_ = std::max(f.t_min_, z_bwd + 1e-9 * (1.0 + std::abs(z_bwd)));
    } else {
        f.t_min_ = 0.0;
    }

    // sample zeta over the window for the inverse map
    const int m = 2048;
    f.ts_.resize(m + 1);
    f.zs_.resize(m + 1);
    for (int i = 0; i <= m; ++i) {
        const double t = f.t_min_ + (f.t_max_ - f.t_min_) * (static_cast<double>(i) / m);
        f.ts_[i] = t;
        f.zs_[i] = f.zeta(t);
    }
    f.slope_ = pchip_slopes(f.zs_, f.ts_);
    return f;
}

PairState LensFrame::state(double t) const {
    check(t);
    return (t >= 0.0 || !has_bwd_) ? fwd_.eval(t) : bwd_.eval(t);
}

double LensFrame::a(double t) const {
    const PairState st = state(t);
    return st.nu_dot / st.nu;
}

double LensFrame::b(double t) const { return state(t).nu; }

double LensFrame::zeta(double t) const {
    const PairState st = state(t);
    return st.mu / st.nu;
}

double LensFrame::zeta_dot(double t) const {
    const double nu = state(t).nu;
    return 1.0 / (nu * nu);
}

double LensFrame::zeta_inverse(double z) const {
    if (z < zs_.front() - 1e-12 || z > zs_.back() + 1e-12)
        throw Error("LensFrame::zeta_inverse: value outside the validity window");
    z = std::clamp(z, zs_.front(), zs_.back());
    const auto it = std::upper_bound(zs_.begin(), zs_.end(), z);
    const std::size_t i = std::min<std::size_t>(
        zs_.size() - 2,
        static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, std::distance(zs_.begin(), it) - 1)));
    // cubic Hermite on [zs_i, zs_{i+1}]
    const double hseg = zs_[i + 1] - zs_[i];
    const double s = (z - zs_[i]) / hseg;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s),
                 h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    double t = h00 * ts_[i] + h10 * hseg * slope_[i] + h01 * ts_[i + 1] + h11 * hseg * slope_[i + 1];
    // Newton polish with the exact zeta, zeta_dot
    for (int k = 0; k < 3; ++k) {
        t = std::clamp(t, t_min_, t_max_);
        const double r = zeta(t) - z;
        t -= r / zeta_dot(t);
    }
    return std::clamp(t, t_min_, t_max_);
}

WaveField resample_scaled(const WaveField& v, const Grid& out_grid, double scale) {
    const Grid& gs = v.grid;
    if (gs.dim() != out_grid.dim()) throw Error("resample_scaled: dimension mismatch");
    const double as = std::abs(scale);
    if (!(as >= 0.25 && as <= 4.0))
        throw Error("resample_scaled: scale factor " + std::to_string(scale) +
                    " outside the supported [1/4, 4] range");
    bool wraps = false;
    for (int a = 0; a < gs.dim(); ++a) {
        if (gs.points(a) != out_grid.points(a))
            throw Error("resample_scaled: point counts must match");
        if (as * out_grid.half_width(a) > gs.half_width(a) * (1.0 + 1e-12)) wraps = true;
    }
    // scaled points beyond the source domain read its periodic extension;
    // valid only when the source has decayed at the boundary
    if (wraps && boundary_shell_mass_fraction(v) > 1e-8)
        throw Error("resample_scaled: scaled points wrap around an undecayed source field");

    WaveField w = v;
    fft::forward(w);
    // fftshift so that index n corresponds to sigma = n - N/2, and fold in the
    // e^{i k_p L} = (-1)^sigma offset of the grid origin ((-1)^{N/2} = 1 for
    // the N >= 8 powers of two)
    for (int a = 0; a < gs.dim(); ++a) {
        const int N = gs.points(a);
        const std::size_t stride = gs.stride(a);
        int other[2], no = 0;
        for (int b = 0; b < 3; ++b)
            if (b != a) other[no++] = b;
        for (int p = 0; p < gs.points(other[0]); ++p)
            for (int q = 0; q < gs.points(other[1]); ++q) {
                const std::size_t base = p * gs.stride(other[0]) + q * gs.stride(other[1]);
                for (int n = 0; n < N / 2; ++n)
                    std::swap(w.values[base + n * stride], w.values[base + (n + N / 2) * stride]);
            }
    }
    gs.for_each([&](std::size_t idx, int i0, int i1, int i2) {
        if ((i0 + i1 + i2) & 1) w[idx] = -w[idx];
    });
    // v(xi_m) = (1/N) sum_n Vt_n e^{-i theta (m - N/2)(n - N/2)},
    // theta = -pi * h_out * scale / L_src
    for (int a = 0; a < gs.dim(); ++a) {
        const double theta = -M_PI * out_grid.spacing(a) * scale / gs.half_width(a);
        fft::scaled_ft_axis(gs, w.values.data(), a, theta);
    }
    WaveField out(out_grid, v.time);
    const double norm = 1.0 / static_cast<double>(gs.size());
    for (std::size_t i = 0; i < out.values.size(); ++i) out[i] = w.values[i] * norm;
    return out;
}

WaveField lens_forward(const WaveField& v_at_zeta, const LensFrame& frame, double t,
                       const Grid& out_grid) {
    if (!frame.contains(t)) throw Error("lens_forward: t outside the validity window");
    const double z = frame.zeta(t);
    if (std::abs(v_at_zeta.time - z) > 1e-9 * (1.0 + std::abs(z)))
        throw Error("lens_forward: sampler time " + std::to_string(v_at_zeta.time) +
                    " does not match zeta(t) = " + std::to_string(z));
    const PairState st = frame.state(t);
    if (!(st.nu > 0.0)) throw Error("lens_forward: nu <= 0");

    WaveField u = resample_scaled(v_at_zeta, out_grid, 1.0 / st.nu);
    const double amp = std::pow(st.nu, -0.5 * out_grid.dim());
    const double aa = st.nu_dot / st.nu;
    out_grid.for_each([&](std::size_t idx, int i0, int i1, int i2) {
        const int ii[3] = {i0, i1, i2};
        double x2 = 0.0;
        for (int ax = 0; ax < out_grid.dim(); ++ax) {
            const double x = out_grid.coord(ax, ii[ax]);
            x2 += x * x;
        }
        u[idx] *= amp * std::polar(1.0, 0.5 * aa * x2);
    });
    u.time = t;
    return u;
}

double lens_h(const TimeCoefficient& H, const LensFrame& frame, int dim, int sigma, double t) {
    if (!frame.contains(t)) throw Error("lens_h: t outside the validity window");
    const double nu = frame.b(t);
    const double expo = static_cast<double>(dim) * sigma - 2.0;
    return std::pow(nu, expo) * H.value(frame.zeta(t));
}

LensRoundtripReport lens_roundtrip_check(const NonlinearitySpec& nl,
                                         const TimeCoefficient& omega, const WaveField& u0,
                                         double t, const StepControls& controls) {
    const Grid& g = u0.grid;
    nl.validate(g.dim());
    LensFrame frame = LensFrame::build(omega, std::min(0.0, t), std::max(0.0, t));
    if (!frame.contains(t))
        throw Error("lens_roundtrip_check: t outside the lens validity window");
    const double z = frame.zeta(t);

    // autonomous frame: coupling H (constant; taken from nl.H or nl.lambda)
    NonlinearitySpec auto_nl;
    auto_nl.sigma = nl.sigma;
    auto_nl.lambda = nl.H ? nl.H->value(0.0) : nl.lambda;
    ZeroPotential noV;
    auto vtrace = strang_propagate(u0, noV, auto_nl, 0.0, z, controls);
    if (vtrace.status != RunStatus::Completed)
        throw Error("lens_roundtrip_check: autonomous solve aborted: " + vtrace.abort_message);

    // direct frame: potential Omega with the induced coupling h
    NonlinearitySpec direct_nl;
    direct_nl.sigma = nl.sigma;
    const double dsigma = static_cast<double>(g.dim()) * nl.sigma;
    if (std::abs(dsigma - 2.0) < 1e-14) {
        direct_nl.lambda = auto_nl.lambda;  // critical power: transform preserves autonomy
    } else {
        const int m = 512;
        std::vector<double> ts(m + 1), hs(m + 1);
        const double lo = std::min(0.0, t) - 1e-9, hi = std::max(0.0, t) + 1e-9;
        for (int i = 0; i <= m; ++i) {
            ts[i] = lo + (hi - lo) * (static_cast<double>(i) / m);
            TimeCoefficient Hc = TimeCoefficient::constant(auto_nl.lambda);
            hs[i] = lens_h(Hc, frame, g.dim(), nl.sigma, std::clamp(ts[i], frame.t_min(), frame.t_max()));
        }
        direct_nl.h = TimeCoefficient::table(ts, hs);
    }
    QuadraticPotential V(g.dim(), omega);
    auto utrace = strang_propagate(u0, V, direct_nl, 0.0, t, controls);
    if (utrace.status != RunStatus::Completed)
        throw Error("lens_roundtrip_check: direct solve aborted: " + utrace.abort_message);

    WaveField mapped = lens_forward(vtrace.final_field, frame, t, g);
    LensRoundtripReport rep;
    rep.zeta_t = z;
    const double ref = l2_norm(utrace.final_field);
    double s2 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s2 += std::norm(mapped[i] - utrace.final_field[i]);
    rep.l2_gap = std::sqrt(s2 * g.cell_volume()) / ref;
    WaveField diff(g, t);
    for (std::size_t i = 0; i < g.size(); ++i) diff[i] = mapped[i] - utrace.final_field[i];
    rep.h1_gap = sobolev_norm(diff, 1) / sobolev_norm(utrace.final_field, 1);
    return rep;
}

}  // namespace nlsq
