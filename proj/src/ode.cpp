#include "nlsq/ode.hpp"

#include <algorithm>
#include <cstdio>

namespace nlsq {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// embedded 4th-order error weights (b - b*)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// continuous-extension weights
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

}  // namespace

const OdeSegment& OdeSolution::segment_at(double t) const {
    if (segments_.empty()) throw NumericsError("OdeSolution: empty solution");
    if (!contains(t, 1e-9 * (1.0 + std::abs(t))))
        throw NumericsError("OdeSolution: t=" + std::to_string(t) + " outside integrated range [" +
                            std::to_string(t_min()) + ", " + std::to_string(t_max()) + "]");
    const bool fwd = t_end_ >= t_start_;
    // binary search over segment end times (monotone in integration direction)
    std::size_t lo = 0, hi = segments_.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        const double t1 = segments_[mid].t1;
        if ((fwd && t1 < t) || (!fwd && t1 > t))
            lo = mid + 1;
        else
            hi = mid;
    }
    return segments_[lo];
}

void OdeSolution::eval(double t, OdeState& out) const {
    const OdeSegment& s = segment_at(t);
    const double h = s.t1 - s.t0;
    const double th = (h == 0.0) ? 0.0 : (t - s.t0) / h;
    const double th1 = 1.0 - th;
    for (std::size_t i = 0; i < dim_; ++i) {
        const auto& r = s.rcont[i];
        out[i] = r[0] + th * (r[1] + th1 * (r[2] + th * (r[3] + th1 * r[4])));
    }
}

double OdeSolution::eval_component(double t, std::size_t i) const {
    const OdeSegment& s = segment_at(t);
    const double h = s.t1 - s.t0;
    const double th = (h == 0.0) ? 0.0 : (t - s.t0) / h;
    const double th1 = 1.0 - th;
    const auto& r = s.rcont[i];
    return r[0] + th * (r[1] + th1 * (r[2] + th * (r[3] + th1 * r[4])));
}

OdeSolution integrate_dopri5(const OdeRhs& f, std::size_t dim, double t0, double t1,
                             const OdeState& y0, const OdeOptions& opts) {
    if (dim == 0 || dim > kOdeMaxDim) throw NumericsError("integrate_dopri5: bad dimension");
    std::vector<OdeSegment> segs;
    if (t1 == t0) {
        OdeSegment s;
        s.t0 = s.t1 = t0;
        for (std::size_t i = 0; i < dim; ++i) s.rcont[i] = {y0[i], 0, 0, 0, 0};
        segs.push_back(s);
        return OdeSolution(dim, t0, t1, std::move(segs));
    }

    const double dir = (t1 > t0) ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    double h = dir * std::min(0.01 * span, 0.1);
    if (opts.max_step > 0.0) h = dir * std::min(std::abs(h), opts.max_step);

    OdeState y = y0, k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, ytmp{}, y5{};
    double t = t0;
    f(t, y, k1);  // FSAL

    std::size_t n_accepted = 0;
    for (std::size_t iter = 0; iter < opts.max_steps; ++iter) {
        if ((t - t1) * dir >= 0.0) break;
        if ((t + h - t1) * dir > 0.0) h = t1 - t;
        if (std::abs(h) < 1e-14 * (1.0 + std::abs(t)))
            throw NumericsError("integrate_dopri5: step size underflow at t=" + std::to_string(t));

        for (std::size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        f(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        f(t + h, ytmp, k6);
        for (std::size_t i = 0; i < dim; ++i)
            y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        f(t + h, y5, k7);

        double err = 0.0;
        std::size_t n_err = 0;
        for (std::size_t i = 0; i < dim; ++i) {
            if (opts.error_exclude_mask & (1u << i)) continue;
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                   e6 * k6[i] + e7 * k7[i]);
            const double sc = opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err += (ei / sc) * (ei / sc);
            ++n_err;
        }
        err = std::sqrt(err / std::max<std::size_t>(n_err, 1));

        if (err <= 1.0) {
            OdeSegment s;
            s.t0 = t;
            s.t1 = t + h;
            for (std::size_t i = 0; i < dim; ++i) {
                const double ydiff = y5[i] - y[i];
                const double bspl = h * k1[i] - ydiff;
                s.rcont[i][0] = y[i];
                s.rcont[i][1] = ydiff;
                s.rcont[i][2] = bspl;
                s.rcont[i][3] = ydiff - h * k7[i] - bspl;
                s.rcont[i][4] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                     d6 * k6[i] + d7 * k7[i]);
            }
            segs.push_back(s);
            t += h;
            y = y5;
            k1 = k7;  // FSAL
            ++n_accepted;
        }

        double fac = 0.9 * std::pow(std::max(err, 1e-16), -0.2);
        fac = std::clamp(fac, 0.2, 5.0);
        h *= fac;
        if (opts.max_step > 0.0 && std::abs(h) > opts.max_step) h = dir * opts.max_step;
    }
    if ((t - t1) * dir < 0.0)
        throw NumericsError("integrate_dopri5: max step count exceeded at t=" + std::to_string(t));
    return OdeSolution(dim, t0, t1, std::move(segs));
}

void rk4_fixed(const OdeRhs& f, std::size_t dim, double t0, double h, std::size_t n_steps,
               OdeState& y, const std::function<void(std::size_t, double, const OdeState&)>& on_node) {
    OdeState k1{}, k2{}, k3{}, k4{}, ytmp{};
    if (on_node) on_node(0, t0, y);
    for (std::size_t n = 0; n < n_steps; ++n) {
        const double t = t0 + static_cast<double>(n) * h;
        f(t, y, k1);
        for (std::size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + 0.5 * h * k1[i];
        f(t + 0.5 * h, ytmp, k2);
        for (std::size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + 0.5 * h * k2[i];
        f(t + 0.5 * h, ytmp, k3);
        for (std::size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + h * k3[i];
        f(t + h, ytmp, k4);
        for (std::size_t i = 0; i < dim; ++i)
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (on_node) on_node(n + 1, t0 + static_cast<double>(n + 1) * h, y);
    }
}

}  // namespace nlsq
