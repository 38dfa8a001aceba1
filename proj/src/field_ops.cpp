#include "nlsq/field_ops.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "nlsq/fft.hpp"

namespace nlsq {

double lq_norm(const WaveField& u, double q) {
    if (!(q >= 1.0)) throw ConfigError("lq_norm: q must be >= 1");
    if (std::isinf(q)) {
        double m = 0.0;
        for (const cplx& v : u.values) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    if (q == 2.0) {
        for (const cplx& v : u.values) s += std::norm(v);
    } else {
        for (const cplx& v : u.values) s += std::pow(std::abs(v), q);
    }
    return std::pow(s * u.grid.cell_volume(), 1.0 / q);
}

double l2_norm(const WaveField& u) { return lq_norm(u, 2.0); }

cplx inner(const WaveField& a, const WaveField& b) {
    if (!(a.grid == b.grid)) throw Error("inner: grid mismatch");
    cplx s(0.0, 0.0);
    for (std::size_t i = 0; i < a.values.size(); ++i) s += std::conj(a.values[i]) * b.values[i];
    return s * a.grid.cell_volume();
}

double l2_inner_abs(const WaveField& a, const WaveField& b) { return std::abs(inner(a, b)); }

namespace {

// sum over multi-indices |beta| <= k of prod s_j^{beta_j}, d <= 3
double weight_sum(int k, int d, const double* s) {
    double total = 0.0;
    for (int b0 = 0; b0 <= k; ++b0) {
        const double w0 = std::pow(s[0], b0);
        if (d == 1) {
            total += w0;
            continue;
        }
        for (int b1 = 0; b1 + b0 <= k; ++b1) {
            const double w1 = w0 * std::pow(s[1], b1);
            if (d == 2) {
                total += w1;
                continue;
            }
            for (int b2 = 0; b2 + b1 + b0 <= k; ++b2) total += w1 * std::pow(s[2], b2);
        }
    }
    return total;
}

}  // namespace

double spectral_tail_fraction(const WaveField& u, double frac) {
    WaveField w = u;
    fft::forward(w);
    double total = 0.0, tail = 0.0;
    const Grid& g = w.grid;
    g.for_each([&](std::size_t idx, int i0, int i1, int i2) {
        const int ii[3] = {i0, i1, i2};
        const double m = std::norm(w[idx]);
        total += m;
        for (int a = 0; a < g.dim(); ++a) {
            if (std::abs(g.wavenumber(a, ii[a])) > frac * g.nyquist(a)) {
                tail += m;
                break;
            }
        }
    });
    return (total > 0.0) ? tail / total : 0.0;
}

double sobolev_norm(const WaveField& u, int k) {
    if (k < 0 || k > 8) throw ConfigError("sobolev_norm: k must be in [0, 8]");
    WaveField w = u;
    fft::forward(w);
    const Grid& g = w.grid;
    const double parseval = g.cell_volume() / static_cast<double>(g.size());
    double s = 0.0;
    g.for_each([&](std::size_t idx, int i0, int i1, int i2) {
        const int ii[3] = {i0, i1, i2};
        double ks[3] = {0.0, 0.0, 0.0};
        for (int a = 0; a < g.dim(); ++a) {
            const double kk = g.wavenumber(a, ii[a]);
            ks[a] = kk * kk;
        }
        s += weight_sum(k, g.dim(), ks) * std::norm(w[idx]);
    });
    if (k > 0) {
        const double tail = spectral_tail_fraction(u);
        if (tail > 0.01)
            std::cerr << "[nlsq] warning: sobolev_norm aliasing, top spectral shell holds "
                      << tail * 100.0 << "% of mass\n";
    }
    return std::sqrt(s * parseval);
}

double momentum_norm(const WaveField& u, int k) {
    if (k < 0 || k > 8) throw ConfigError("momentum_norm: k must be in [0, 8]");
    const Grid& g = u.grid;
    double s = 0.0;
    g.for_each([&](std::size_t idx, int i0, int i1, int i2) {
        const int ii[3] = {i0, i1, i2};
        double xs[3] = {0.0, 0.0, 0.0};
        for (int a = 0; a < g.dim(); ++a) {
            const double x = g.coord(a, ii[a]);
            xs[a] = x * x;
        }
        s += weight_sum(k, g.dim(), xs) * std::norm(u[idx]);
    });
    return std::sqrt(s * g.cell_volume());
}

WaveField derivative(const WaveField& u, int axis) {
    WaveField w = u;
    fft::forward(w);
    const Grid& g = w.grid;
    g.for_each([&](std::size_t idx, int i0, int i1, int i2) {
        const int ii[3] = {i0, i1, i2};
        w[idx] *= cplx(0.0, g.wavenumber(axis, ii[axis]));
    });
    fft::inverse(w);
    return w;
}

double grad_norm(const WaveField& u) {
    WaveField w = u;
    fft::forward(w);
    const Grid& g = w.grid;
    const double parseval = g.cell_volume() / static_cast<double>(g.size());
    double s = 0.0;
    g.for_each([&](std::size_t idx, int i0, int i1, int i2) {
        const int ii[3] = {i0, i1, i2};
        double k2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            const double kk = g.wavenumber(a, ii[a]);
            k2 += kk * kk;
        }
        s += k2 * std::norm(w[idx]);
    });
    return std::sqrt(s * parseval);
}

WaveField apply_vector_field(const WaveField& u, const FundamentalPair& pair,
                             VectorFieldKind which, int axis, double t) {
    if (std::abs(t - u.time) > 1e-12 * (1.0 + std::abs(t)))
        throw Error("apply_vector_field: time tag mismatch");
    const PairState st = pair.eval(t);
    const double eta = (which == VectorFieldKind::A) ? st.mu : st.nu;
    const double eta_dot = (which == VectorFieldKind::A) ? st.mu_dot : st.nu_dot;

    WaveField d = derivative(u, axis);
    WaveField out(u.grid, u.time);
    const Grid& g = u.grid;
    g.for_each([&](std::size_t idx, int i0, int i1, int i2) {
        const int ii[3] = {i0, i1, i2};
        const double x = g.coord(axis, ii[axis]);
        out[idx] = eta_dot * x * u[idx] + cplx(0.0, 1.0) * eta * d[idx];
    });
    return out;
}

double boundary_shell_mass_fraction(const WaveField& u) {
    const Grid& g = u.grid;
    double total = 0.0, shell = 0.0;
    g.for_each([&](std::size_t idx, int i0, int i1, int i2) {
        const int ii[3] = {i0, i1, i2};
        const double m = std::norm(u[idx]);
        total += m;
        for (int a = 0; a < g.dim(); ++a) {
            if (std::abs(g.coord(a, ii[a])) > 0.9 * g.half_width(a)) {
                shell += m;
                break;
            }
        }
    });
    return (total > 0.0) ? shell / total : 0.0;
}

double variance(const WaveField& u) {
    const Grid& g = u.grid;
    double s = 0.0;
    g.for_each([&](std::size_t idx, int i0, int i1, int i2) {
        const int ii[3] = {i0, i1, i2};
        double x2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            const double x = g.coord(a, ii[a]);
            x2 += x * x;
        }
        s += x2 * std::norm(u[idx]);
    });
    return s * g.cell_volume();
}

double variance_rate(const WaveField& u) {
    const Grid& g = u.grid;
    double s = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
        WaveField d = derivative(u, a);
        g.for_each([&](std::size_t idx, int i0, int i1, int i2) {
            const int ii[3] = {i0, i1, i2};
            s += g.coord(a, ii[a]) * std::imag(std::conj(u[idx]) * d[idx]);
        });
    }
    return 2.0 * s * g.cell_volume();
}

}  // namespace nlsq
