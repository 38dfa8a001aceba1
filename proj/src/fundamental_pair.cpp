#include "nlsq/fundamental_pair.hpp"

#include <algorithm>
#include <cmath>

namespace nlsq {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// bisect f to a root in [a, b] given f(a)*f(b) <= 0
template <typename F>
double bisect(F&& f, double a, double b) {
    double fa = f(a);
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        if (b - a < 1e-14 * (1.0 + std::abs(m))) return m;
        const double fm = f(m);
        if ((fa <= 0.0) == (fm <= 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

PairState FundamentalPair::eval(double t) const {
    OdeState y{};
    ode_.eval(t, y);
    return {y[0], y[1], y[2], y[3]};
}

bool FundamentalPair::gamma_available(double t) const {
    if (!contains(t)) return false;
    if (std::isnan(mu_dot_crossing_)) return true;
    const double dir = (t_end_ >= s_) ? 1.0 : -1.0;
    return (t - mu_dot_crossing_) * dir < 0.0;
}

double FundamentalPair::gamma_integral(double t) const {
    if (!gamma_available(t))
        throw GammaUnavailableError(
            "gamma integral unavailable at t=" + std::to_string(t) +
            " (mu_dot crossed zero at t=" + std::to_string(mu_dot_crossing_) + ")");
    return ode_.eval_component(t, 4);
}

FundamentalPair solve_fundamental(const TimeCoefficient& omega, double s, double t_end,
                                  double rtol, int axis) {
    if (!(rtol > 0.0)) throw ConfigError("solve_fundamental: tol must be > 0");

    OdeRhs rhs = [&omega](double t, const OdeState& y, OdeState& dy) {
        const double O = omega.value(t);
        dy[0] = y[1];
        dy[1] = -O * y[0];
        dy[2] = y[3];
        dy[3] = -O * y[2];
        const double md2 = std::max(y[1] * y[1], 1e-30);
        dy[4] = O / md2;
    };

    OdeOptions opts;
    opts.rtol = rtol;
    opts.atol = rtol * 1e-2;
    opts.error_exclude_mask = 1u << 4;  // gamma integral rides along
    OdeState y0{0.0, 1.0, 1.0, 0.0, 0.0};

    FundamentalPair p;
    p.axis_ = axis;
    p.s_ = s;
    p.t_end_ = t_end;
    p.tol_ = rtol;
    p.ode_ = integrate_dopri5(rhs, 5, s, t_end, y0, opts);

    // sign-monitor mu_dot across accepted steps (plus interior samples)
    double prev_t = s;
    double prev_md = 1.0;
    for (const auto& seg : p.ode_.segments()) {
        for (int k = 1; k <= 8; ++k) {
            const double t = seg.t0 + (seg.t1 - seg.t0) * (k / 8.0);
            const double md = p.ode_.eval_component(t, 1);
            if ((prev_md < 0.0) != (md < 0.0)) {
                p.mu_dot_crossing_ = bisect(
                    [&p](double tt) { return p.ode_.eval_component(tt, 1); }, prev_t, t);
                return p;
            }
            prev_t = t;
            prev_md = md;
        }
    }
    return p;
}

std::vector<FundamentalPair> solve_fundamental(const std::vector<TimeCoefficient>& omega,
                                               double s, double t_end, double rtol) {
    std::vector<FundamentalPair> out;
    out.reserve(omega.size());
    for (std::size_t j = 0; j < omega.size(); ++j)
        out.push_back(solve_fundamental(omega[j], s, t_end, rtol, static_cast<int>(j)));
    return out;
}

double wronskian_residual(const FundamentalPair& pair, double t) {
    if (!pair.contains(t))
        throw Error("wronskian_residual: t outside integrated range");
    const PairState st = pair.eval(t);
    return st.nu * st.mu_dot - st.mu * st.nu_dot - 1.0;
}

MehlerCoefficients mehler_coefficients(const FundamentalPair& pair, double t) {
    if (!pair.contains(t))
        throw Error("mehler_coefficients: t outside integrated range");
    const PairState st = pair.eval(t);
    const double band = caustic_band(t, pair.s());
    if (std::abs(st.mu) < band)
        throw CausticError("mehler_coefficients: caustic at t=" + std::to_string(t) +
                           " (|mu|=" + std::to_string(std::abs(st.mu)) + ")");
    if (!pair.gamma_available(t) || std::abs(st.mu_dot) < band)
        throw GammaUnavailableError("mehler_coefficients: mu_dot vanishes on path to t=" +
                                    std::to_string(t));

    MehlerCoefficients mc;
    mc.state = st;
    mc.alpha = st.mu_dot / st.mu;
    mc.beta = -1.0 / st.mu;
    mc.gamma = 1.0 / (st.mu * st.mu_dot) - pair.gamma_integral(t);
    // branch fixed by the free propagator as t -> s^+ (mu ~ t-s):
    // (2 i pi mu)^(-1/2) = exp(-i sgn(mu) pi/4) / sqrt(2 pi |mu|)
    const double sgn = (st.mu >= 0.0) ? 1.0 : -1.0;
    mc.prefactor = std::polar(1.0 / std::sqrt(2.0 * kPi * std::abs(st.mu)), -sgn * kPi / 4.0);
    return mc;
}

std::vector<double> caustic_times(const FundamentalPair& pair, double t_lo, double t_hi) {
    if (t_lo > t_hi) std::swap(t_lo, t_hi);
    if (!pair.contains(t_lo) || !pair.contains(t_hi))
        throw Error("caustic_times: interval outside integrated range");

    std::vector<double> zeros;
    double prev_t = t_lo;
    double prev_mu = pair.mu(t_lo);
    for (const auto& seg : pair.ode().segments()) {
        const double a = std::max(std::min(seg.t0, seg.t1), t_lo);
        const double b = std::min(std::max(seg.t0, seg.t1), t_hi);
        if (!(b > a)) continue;
        for (int k = 1; k <= 16; ++k) {
            const double t = a + (b - a) * (k / 16.0);
            const double mu = pair.mu(t);
            if (mu == 0.0) {
                zeros.push_back(t);
            } else if ((prev_mu < 0.0) != (mu < 0.0) && prev_mu != 0.0) {
                zeros.push_back(
                    bisect([&pair](double tt) { return pair.mu(tt); }, prev_t, t));
            }
            prev_t = t;
            prev_mu = mu;
        }
    }
    std::sort(zeros.begin(), zeros.end());
    return zeros;
}

std::vector<TaggedCaustic> caustic_times(const std::vector<FundamentalPair>& pairs,
                                         double t_lo, double t_hi) {
    std::vector<TaggedCaustic> out;
    for (const auto& p : pairs)
        for (double t : caustic_times(p, t_lo, t_hi)) out.push_back({t, p.axis()});
    std::sort(out.begin(), out.end(),
              [](const TaggedCaustic& a, const TaggedCaustic& b) { return a.t < b.t; });
    return out;
}

StructuralReport structural_checks(const FundamentalPair& pair, const TimeCoefficient& omega,
                                   double t_lo, double t_hi) {
    if (t_lo > t_hi) std::swap(t_lo, t_hi);
    if (!pair.contains(t_lo) || !pair.contains(t_hi))
        throw Error("structural_checks: interval outside integrated range");

    constexpr int kSamples = 512;
    StructuralReport rep;
    rep.omega_nonpositive = true;
    rep.nu_ge_one = rep.mu_ge_elapsed = rep.nu_dot_ge_zero = rep.mu_dot_ge_one = true;

    // least-squares slope of log(S) vs |t-s| over samples with S >= 1
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int i = 0; i <= kSamples; ++i) {
        const double t = t_lo + (t_hi - t_lo) * (static_cast<double>(i) / kSamples);
        const PairState st = pair.eval(t);
        const double tau = std::abs(t - pair.s());
        const double S = std::abs(st.mu) + std::abs(st.mu_dot) + std::abs(st.nu) +
                         std::abs(st.nu_dot);
        if (S >= 1.0 && tau > 1e-6) {
            const double ls = std::log(S);
            sx += tau;
            sy += ls;
            sxx += tau * tau;
            sxy += tau * ls;
            ++n;
        }
        if (omega.value(t) > 0.0) rep.omega_nonpositive = false;
        const double slack = 1e-9 * (1.0 + tau);
        if (st.nu < 1.0 - slack) rep.nu_ge_one = false;
        if (st.mu < (t - pair.s()) - slack) rep.mu_ge_elapsed = false;
        if (st.nu_dot < -slack) rep.nu_dot_ge_zero = false;
        if (st.mu_dot < 1.0 - slack) rep.mu_dot_ge_one = false;
    }
    if (n >= 2) {
        const double denom = n * sxx - sx * sx;
        rep.envelope_C = (denom > 0.0) ? std::max(0.0, (n * sxy - sx * sy) / denom) : 0.0;
    }
    return rep;
}

}  // namespace nlsq
