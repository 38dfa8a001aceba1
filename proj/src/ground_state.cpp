#include "nlsq/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace nlsq {

namespace {

struct RadialOde {
    int d;
    double p;
    // y = (Q, P); Q'' = 2(Q - |Q|^{p-1} Q) - (d-1)/r P
    void rhs(double r, const double y[2], double dy[2]) const {
        const double Q = y[0];
        const double nlq = std::pow(std::abs(Q), p - 1.0) * Q;
        dy[0] = y[1];
        dy[1] = 2.0 * (Q - nlq) - (r > 0.0 ? (d - 1) / r * y[1] : 0.0);
    }
};

// series start near r=0: Q = a + c2 r^2 + c4 r^4
void series_init(double a, int d, double p, double r, double& Q, double& P) {
    const double c2 = (a - std::pow(a, p)) / d;
    const double c4 = (1.0 - p * std::pow(a, p - 1.0)) * c2 / (4.0 + 2.0 * d);
    Q = a + c2 * r * r + c4 * r * r * r * r;
    P = 2.0 * c2 * r + 4.0 * c4 * r * r * r;
}

enum class Shot { CrossedZero, BlewUp, Undecided };

// classify a shooting parameter with fixed-step RK4
Shot classify(double a, int d, double p, double r_end, double h) {
    RadialOde ode{d, p};
    const double r0 = 1e-8;
    double y[2];
    series_init(a, d, p, r0, y[0], y[1]);
    double k1[2], k2[2], k3[2], k4[2], yt[2];
    const long n = std::lround((r_end - r0) / h);
    double r = r0;
    for (long i = 0; i < n; ++i) {
        ode.rhs(r, y, k1);
        yt[0] = y[0] + 0.5 * h * k1[0];
        yt[1] = y[1] + 0.5 * h * k1[1];
        ode.rhs(r + 0.5 * h, yt, k2);
        yt[0] = y[0] + 0.5 * h * k2[0];
        yt[1] = y[1] + 0.5 * h * k2[1];
        ode.rhs(r + 0.5 * h, yt, k3);
        yt[0] = y[0] + h * k3[0];
        yt[1] = y[1] + h * k3[1];
        ode.rhs(r + h, yt, k4);
        y[0] += h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
        y[1] += h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
        r += h;
        if (y[0] < 0.0) return Shot::CrossedZero;
        if (y[0] > 2.0 * a) return Shot::BlewUp;
    }
    return Shot::Undecided;
}

}  // namespace

double GroundState::eval(double r) const {
    r = std::abs(r);
    const double rmax = r_max();
    if (r >= rmax) return q_.back() * std::exp(-std::sqrt(2.0) * (r - rmax));
    const double s = r / dr_;
    const std::size_t i = std::min<std::size_t>(q_.size() - 2, static_cast<std::size_t>(s));
    const double x = s - static_cast<double>(i);
    // 4-point Lagrange with even reflection at the origin
    auto at = [&](std::ptrdiff_t j) {
        if (j < 0) j = -j;
        if (j >= static_cast<std::ptrdiff_t>(q_.size()))
            return q_.back();
        return q_[static_cast<std::size_t>(j)];
    };
    const double qm1 = at(static_cast<std::ptrdiff_t>(i) - 1), q0 = at(i), q1 = at(i + 1),
                 q2 = at(i + 2);
    const double c0 = -x * (x - 1.0) * (x - 2.0) / 6.0;
    const double c1 = (x + 1.0) * (x - 1.0) * (x - 2.0) / 2.0;
    const double c2 = -(x + 1.0) * x * (x - 2.0) / 2.0;
    const double c3 = (x + 1.0) * x * (x - 1.0) / 6.0;
    return c0 * qm1 + c1 * q0 + c2 * q1 + c3 * q2;
}

GroundState GroundState::compute(int d, double tol) {
    if (d < 1 || d > 3) throw ConfigError("GroundState: d must be 1, 2 or 3");
    if (!(tol > 0.0)) throw ConfigError("GroundState: tol must be > 0");
    const double p = 1.0 + 4.0 / d;

    // bracket the shooting parameter
    double lo = 0.5, hi = 2.0;
    const double r_scan = 30.0, h_scan = 1e-3;
    int guard = 0;
    while (classify(hi, d, p, r_scan, h_scan) != Shot::CrossedZero) {
        hi *= 2.0;
        if (++guard > 8) throw NumericsError("GroundState: bisection bracket failure (hi)");
    }
    guard = 0;
    while (classify(lo, d, p, r_scan, h_scan) == Shot::CrossedZero) {
        lo *= 0.5;
        if (++guard > 8) throw NumericsError("GroundState: bisection bracket failure (lo)");
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (classify(mid, d, p, r_scan, h_scan) == Shot::CrossedZero)
            hi = mid;
        else
            lo = mid;
    }
    const double a = 0.5 * (lo + hi);

    // final pass: fixed-step RK4 landing exactly on the stored nodes; the raw
    // trajectory is kept (it satisfies the ODE to integrator defect), then
    // truncated where decay ends (floor reached or the unstable mode turns
    // the profile around)
    RadialOde ode{d, p};
    GroundState gs;
    gs.dim_ = d;
    gs.power_ = p;
    gs.tol_ = tol;
    gs.dr_ = 1.5e-3;
    const std::size_t n_budget = static_cast<std::size_t>(r_scan / gs.dr_);
    gs.q_.assign(n_budget, 0.0);
    gs.q_[0] = a;
    {
        const int sub = 4;  // integration substeps per node
        const double h = gs.dr_ / sub;
        double y[2];
        series_init(a, d, p, gs.dr_, y[0], y[1]);  // start at the first node
        gs.q_[1] = y[0];
        double k1[2], k2[2], k3[2], k4[2], yt[2];
        for (std::size_t node = 1; node + 1 < n_budget; ++node) {
            double r = gs.dr_ * static_cast<double>(node);
            for (int ssub = 0; ssub < sub; ++ssub) {
                ode.rhs(r, y, k1);
                yt[0] = y[0] + 0.5 * h * k1[0];
                yt[1] = y[1] + 0.5 * h * k1[1];
                ode.rhs(r + 0.5 * h, yt, k2);
                yt[0] = y[0] + 0.5 * h * k2[0];
                yt[1] = y[1] + 0.5 * h * k2[1];
                ode.rhs(r + 0.5 * h, yt, k3);
                yt[0] = y[0] + h * k3[0];
                yt[1] = y[1] + h * k3[1];
                ode.rhs(r + h, yt, k4);
                y[0] += h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
                y[1] += h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
                r += h;
            }
            gs.q_[node + 1] = y[0];
        }
    }
    std::size_t n_cut = n_budget;
    for (std::size_t i = 1; i < n_budget; ++i) {
        if (gs.q_[i] <= 1e-10 || gs.q_[i] > gs.q_[i - 1]) {
            n_cut = i;
            break;
        }
    }
    if (n_cut < 64) throw NumericsError("GroundState: profile collapsed before decaying");
    gs.q_.resize(n_cut);

    // residual certificate: 8th-order central differences with even reflection
    const double h = gs.dr_;
    auto q_at = [&](std::ptrdiff_t j) {
        if (j < 0) j = -j;
        return gs.q_[static_cast<std::size_t>(j)];
    };
    static const double w2[4] = {8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};
    const double w2c = -205.0 / 72.0;
    static const double w1[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
    double worst = 0.0;
    for (std::size_t i = 0; i + 4 < n_cut; ++i) {
        const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i);
        double d2 = w2c * q_at(j);
        double d1 = 0.0;
        for (int k = 1; k <= 4; ++k) {
            d2 += w2[k - 1] * (q_at(j + k) + q_at(j - k));
            d1 += w1[k - 1] * (q_at(j + k) - q_at(j - k));
        }
        d2 /= h * h;
        d1 /= h;
        const double r = h * static_cast<double>(i);
        const double lap = (i == 0) ? d * d2 : d2 + (d - 1) / r * d1;
        const double Q = gs.q_[i];
        const double res = std::abs(-0.5 * lap + Q - std::pow(Q, p));
        worst = std::max(worst, res);
    }
    gs.residual_ = worst;
    if (gs.residual_ > tol)
        throw NumericsError("GroundState: certified residual " + std::to_string(gs.residual_) +
                            " exceeds requested tol");
    return gs;
}

void GroundState::save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("GroundState::save: cannot open " + path);
    const char magic[4] = {'Q', 'G', 'S', 'C'};
    f.write(magic, 4);
    const std::uint32_t version = 1, dd = static_cast<std::uint32_t>(dim_);
    f.write(reinterpret_cast<const char*>(&version), 4);
    f.write(reinterpret_cast<const char*>(&dd), 4);
    f.write(reinterpret_cast<const char*>(&tol_), 8);
    f.write(reinterpret_cast<const char*>(&dr_), 8);
    f.write(reinterpret_cast<const char*>(&residual_), 8);
    const std::uint64_t n = q_.size();
    f.write(reinterpret_cast<const char*>(&n), 8);
    f.write(reinterpret_cast<const char*>(q_.data()), static_cast<std::streamsize>(8 * n));
}

GroundState GroundState::load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("GroundState::load: cannot open " + path);
    char magic[4];
    f.read(magic, 4);
    if (!f || std::string(magic, 4) != "QGSC") throw Error("GroundState::load: bad magic");
    std::uint32_t version = 0, dd = 0;
    f.read(reinterpret_cast<char*>(&version), 4);
    f.read(reinterpret_cast<char*>(&dd), 4);
    GroundState gs;
    gs.dim_ = static_cast<int>(dd);
    gs.power_ = 1.0 + 4.0 / gs.dim_;
    f.read(reinterpret_cast<char*>(&gs.tol_), 8);
    f.read(reinterpret_cast<char*>(&gs.dr_), 8);
    f.read(reinterpret_cast<char*>(&gs.residual_), 8);
    std::uint64_t n = 0;
    f.read(reinterpret_cast<char*>(&n), 8);
    gs.q_.resize(n);
    f.read(reinterpret_cast<char*>(gs.q_.data()), static_cast<std::streamsize>(8 * n));
    if (!f) throw Error("GroundState::load: truncated file");
    return gs;
}

GroundState GroundState::cached(int d, double tol, const std::string& cache_dir) {
    char name[64];
    std::snprintf(name, sizeof(name), "gs_d%d_tol%.3e.bin", d, tol);
    const std::filesystem::path path = std::filesystem::path(cache_dir) / name;
    if (std::filesystem::exists(path)) {
        try {
            return load(path.string());
        } catch (const Error&) {
            // fall through to recompute
        }
    }
    GroundState gs = compute(d, tol);
    std::error_code ec;
    std::filesystem::create_directories(cache_dir, ec);
    if (!ec) gs.save(path.string());
    return gs;
}

}  // namespace nlsq
