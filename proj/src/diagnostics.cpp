#include "nlsq/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace nlsq {

namespace {

double lq_pow(const WaveField& u, double q) {
    // ||u||_q^q
    double s = 0.0;
    for (const cplx& v : u.values) s += std::pow(std::abs(v), q);
    return s * u.grid.cell_volume();
}

double integral_weighted(const WaveField& u, const std::vector<double>& w) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) s += w[i] * std::norm(u[i]);
    return s * u.grid.cell_volume();
}

}  // namespace

double energy(const WaveField& u, const PotentialSampler& V, const NonlinearitySpec& nl,
              double t) {
    const double kin = 0.5 * std::pow(grad_norm(u), 2);
    double pot = 0.0;
    if (!V.is_zero()) {
        std::vector<double> vbuf(u.grid.size());
        V.fill(t, u.grid, vbuf.data());
        pot = integral_weighted(u, vbuf);
    }
    double nlterm = 0.0;
    if (nl.active()) {
        const double q = 2.0 * nl.sigma + 2.0;
        nlterm = nl.coupling(t) / (nl.sigma + 1.0) * lq_pow(u, q);
    }
    return kin + pot + nlterm;
}

DiagnosticsRecord compute_record(const WaveField& u, double t, const PotentialSampler& V,
                                 const NonlinearitySpec& nl, const FundamentalPair* pair,
                                 const DiagnosticsSelection& sel) {
    DiagnosticsRecord r;
    r.t = t;
    r.mass = l2_norm(u);
    r.boundary_mass = boundary_shell_mass_fraction(u);
    r.grad = grad_norm(u);

    const Grid& g = u.grid;
    const double q = 2.0 * nl.sigma + 2.0;
    const double lqq = (sel.lq_nl || sel.energy || sel.virial || sel.ab_laws ||
                        sel.pseudo_conformal)
                           ? lq_pow(u, q)
                           : 0.0;
    r.lq_nl = std::pow(lqq, 1.0 / q);
    const double coup = nl.coupling(t);

    if (sel.energy) {
        double pot = 0.0, dtv = 0.0;
        if (!V.is_zero()) {
            std::vector<double> vbuf(g.size());
            V.fill(t, g, vbuf.data());
            pot = integral_weighted(u, vbuf);
            if (const auto* qv = dynamic_cast<const QuadraticPotential*>(&V)) {
                qv->fill_dt(t, g, vbuf.data());
                dtv = integral_weighted(u, vbuf);
            }
        }
        r.energy = 0.5 * r.grad * r.grad + coup / (nl.sigma + 1.0) * lqq + pot;
        r.energy_rhs = dtv;
    }

    if (sel.virial) {
        r.y = variance(u);
        r.dy = variance_rate(u);
        double xgv = 0.0;
        if (const auto* qv = dynamic_cast<const QuadraticPotential*>(&V)) {
            std::vector<double> vbuf(g.size());
            qv->fill_xgradv(t, g, vbuf.data());
            xgv = integral_weighted(u, vbuf);
        }
        const double dsigma = static_cast<double>(g.dim()) * nl.sigma;
        r.virial_rhs = 2.0 * r.grad * r.grad - 2.0 * xgv +
                       2.0 * coup * dsigma / (nl.sigma + 1.0) * lqq;
    }

    if (sel.ab_laws) {
        if (!pair) throw Error("compute_record: ab_laws requires an isotropic fundamental pair");
        const PairState st = pair->eval(t);
        double a2 = 0.0, b2 = 0.0;
        r.a_norm.resize(g.dim());
        r.b_norm.resize(g.dim());
        for (int a = 0; a < g.dim(); ++a) {
            const double na = l2_norm(apply_vector_field(u, *pair, VectorFieldKind::A, a, t));
            const double nb = l2_norm(apply_vector_field(u, *pair, VectorFieldKind::B, a, t));
            r.a_norm[a] = na;
            r.b_norm[a] = nb;
            a2 += na * na;
            b2 += nb * nb;
        }
        const double dsigma = static_cast<double>(g.dim()) * nl.sigma;
        r.theta_a = 0.5 * a2 + coup * st.mu * st.mu / (nl.sigma + 1.0) * lqq;
        r.theta_b = 0.5 * b2 + coup * st.nu * st.nu / (nl.sigma + 1.0) * lqq;
        r.ab_rhs_a = coup / (nl.sigma + 1.0) * st.mu * st.mu_dot * (2.0 - dsigma) * lqq;
        r.ab_rhs_b = coup / (nl.sigma + 1.0) * st.nu * st.nu_dot * (2.0 - dsigma) * lqq;
    }

    if (sel.pseudo_conformal) {
        if (!V.is_zero()) throw Error("compute_record: pseudo-conformal law needs V = 0");
        // J_j(t) = x_j + i t d_j
        double j2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            WaveField d = derivative(u, a);
            double sloc = 0.0;
            g.for_each([&](std::size_t idx, int i0, int i1, int i2) {
                const int ii[3] = {i0, i1, i2};
                const double x = g.coord(a, ii[a]);
                sloc += std::norm(x * u[idx] + cplx(0.0, t) * d[idx]);
            });
            j2 += sloc * g.cell_volume();
        }
        const double dsigma = static_cast<double>(g.dim()) * nl.sigma;
        r.pc_theta = 0.5 * j2 + coup * t * t / (nl.sigma + 1.0) * lqq;
        r.pc_rhs = t * coup / (nl.sigma + 1.0) * (2.0 - dsigma) * lqq;
    }

    for (int k = 1; k <= sel.hk; ++k) r.hk.push_back(sobolev_norm(u, k));
    for (int k = 1; k <= sel.momenta; ++k) r.momenta.push_back(momentum_norm(u, k));
    for (double ql : sel.lq_list) r.lq_extra.push_back(lq_norm(u, ql));
    return r;
}

void SolutionTrace::write_csv(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw Error("write_csv: cannot open " + path);
    f << "t,mass,grad,boundary_mass";
    if (selection.energy) f << ",energy,energy_rhs";
    if (selection.virial) f << ",y,dy,virial_rhs";
    if (selection.ab_laws) {
        for (int a = 0; a < dim; ++a) f << ",a_norm" << a;
        for (int a = 0; a < dim; ++a) f << ",b_norm" << a;
        f << ",theta_a,theta_b,ab_rhs_a,ab_rhs_b";
    }
    if (selection.pseudo_conformal) f << ",pc_theta,pc_rhs";
    for (int k = 1; k <= selection.hk; ++k) f << ",h" << k;
    for (int k = 1; k <= selection.momenta; ++k) f << ",mom" << k;
    f << ",lq_nl";
    for (double q : selection.lq_list) f << ",lq_" << q;
    f << "\n";
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), ",%.17g", v);
        f << buf;
    };
    for (const auto& r : records) {
        std::snprintf(buf, sizeof(buf), "%.17g", r.t);
        f << buf;
        put(r.mass);
        put(r.grad);
        put(r.boundary_mass);
        if (selection.energy) {
            put(r.energy);
            put(r.energy_rhs);
        }
        if (selection.virial) {
            put(r.y);
            put(r.dy);
            put(r.virial_rhs);
        }
        if (selection.ab_laws) {
            for (double v : r.a_norm) put(v);
            for (double v : r.b_norm) put(v);
            put(r.theta_a);
            put(r.theta_b);
            put(r.ab_rhs_a);
            put(r.ab_rhs_b);
        }
        if (selection.pseudo_conformal) {
            put(r.pc_theta);
            put(r.pc_rhs);
        }
        for (double v : r.hk) put(v);
        for (double v : r.momenta) put(v);
        put(r.lq_nl);
        for (double v : r.lq_extra) put(v);
        f << "\n";
    }
}

namespace {

// centered first difference of column c against rhs column, interior samples
Series centered_residual(const SolutionTrace& trace, double (*val)(const DiagnosticsRecord&),
                         double (*rhs)(const DiagnosticsRecord&)) {
    const auto& rec = trace.records;
    Series out;
    if (rec.size() < 3) throw Error("residual series: need >= 3 snapshots");
    for (std::size_t i = 1; i + 1 < rec.size(); ++i) {
        const double dtw = rec[i + 1].t - rec[i - 1].t;
        const double d = (val(rec[i + 1]) - val(rec[i - 1])) / dtw;
        out.t.push_back(rec[i].t);
        out.v.push_back(d - rhs(rec[i]));
    }
    return out;
}

}  // namespace

Series energy_law_residual(const SolutionTrace& trace) {
    if (!trace.nl.autonomous())
        throw Error("energy_law_residual: stated law requires autonomous coupling");
    return centered_residual(
        trace, [](const DiagnosticsRecord& r) { return r.energy; },
        [](const DiagnosticsRecord& r) { return r.energy_rhs; });
}

Series virial_residual(const SolutionTrace& trace) {
    const auto& rec = trace.records;
    Series out;
    if (rec.size() < 5) throw Error("virial_residual: need >= 5 snapshots");
    for (std::size_t i = 1; i + 1 < rec.size(); ++i) {
        const double h1 = rec[i].t - rec[i - 1].t;
        const double h2 = rec[i + 1].t - rec[i].t;
        if (std::abs(h1 - h2) > 1e-9 * std::abs(h1)) continue;  // uneven tail spacing
        const double dd = (rec[i + 1].y - 2.0 * rec[i].y + rec[i - 1].y) / (h1 * h2);
        out.t.push_back(rec[i].t);
        out.v.push_back(dd - rec[i].virial_rhs);
    }
    return out;
}

Series moment_rate_residual(const SolutionTrace& trace) {
    return centered_residual(
        trace, [](const DiagnosticsRecord& r) { return r.y; },
        [](const DiagnosticsRecord& r) { return r.dy; });
}

std::pair<Series, Series> ab_law_residuals(const SolutionTrace& trace) {
    if (trace.records.empty() || trace.records.front().a_norm.empty())
        throw Error("ab_law_residuals: trace lacks A/B diagnostics (enable ab_laws)");
    auto sa = centered_residual(
        trace, [](const DiagnosticsRecord& r) { return r.theta_a; },
        [](const DiagnosticsRecord& r) { return r.ab_rhs_a; });
    auto sb = centered_residual(
        trace, [](const DiagnosticsRecord& r) { return r.theta_b; },
        [](const DiagnosticsRecord& r) { return r.ab_rhs_b; });
    return {sa, sb};
}

Series pseudo_conformal_residual(const SolutionTrace& trace) {
    if (!trace.potential_is_zero)
        throw Error("pseudo_conformal_residual: potential present");
    return centered_residual(
        trace, [](const DiagnosticsRecord& r) { return r.pc_theta; },
        [](const DiagnosticsRecord& r) { return r.pc_rhs; });
}

GrowthFit growth_fit(const Series& series) {
    const std::size_t n = series.t.size();
    if (n != series.v.size()) throw Error("growth_fit: mismatched series");
    const std::size_t tail_start = n / 2;
    if (n - tail_start < 20) throw Error("growth_fit: series too short (tail < 20 samples)");
    double t_pos_min = 0.0, t_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (series.t[i] > 0.0 && (t_pos_min == 0.0 || series.t[i] < t_pos_min))
            t_pos_min = series.t[i];
        t_max = std::max(t_max, series.t[i]);
    }
    if (t_pos_min == 0.0 || t_max / t_pos_min < 4.0)
        throw Error("growth_fit: series too short (positive-t span < 4x)");

    auto lsq = [](const std::vector<double>& x, const std::vector<double>& y, double& slope,
                  double& res) {
        const std::size_t m = x.size();
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < m; ++i) {
            sx += x[i];
            sy += y[i];
            sxx += x[i] * x[i];
            sxy += x[i] * y[i];
        }
        const double den = m * sxx - sx * sx;
        slope = (m * sxy - sx * sy) / den;
        const double icpt = (sy - slope * sx) / m;
        double rss = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double e = y[i] - (slope * x[i] + icpt);
            rss += e * e;
        }
        res = std::sqrt(rss / m);
    };

    std::vector<double> ta, la, te, le;
    for (std::size_t i = tail_start; i < n; ++i) {
        if (series.v[i] > 0.0) {
            te.push_back(series.t[i]);
            le.push_back(std::log(series.v[i]));
            if (series.t[i] > 0.0) {
                ta.push_back(std::log(series.t[i]));
                la.push_back(std::log(series.v[i]));
            }
        }
    }
    if (te.size() < 20) throw Error("growth_fit: series too short (positive values)");

    GrowthFit fit;
    lsq(ta, la, fit.alg_exponent, fit.alg_residual);
    lsq(te, le, fit.exp_rate, fit.exp_residual);
    if (fit.exp_residual < 0.5 * fit.alg_residual)
        fit.classification = "exponential";
    else if (fit.alg_residual < 0.5 * fit.exp_residual)
        fit.classification = "algebraic";
    else
        fit.classification = "inconclusive";
    return fit;
}

double mixed_norm(const SolutionTrace& trace, double p, double q) {
    const auto& rec = trace.records;
    if (rec.size() < 2) throw Error("mixed_norm: need >= 2 snapshots");
    auto lq_at = [&](const DiagnosticsRecord& r) -> double {
        if (q == 2.0) return r.mass;
        if (std::abs(q - (2.0 * trace.nl.sigma + 2.0)) < 1e-12) return r.lq_nl;
        for (std::size_t i = 0; i < trace.selection.lq_list.size(); ++i)
            if (std::abs(trace.selection.lq_list[i] - q) < 1e-12) return r.lq_extra[i];
        throw Error("mixed_norm: L^q norm for q=" + std::to_string(q) + " was not recorded");
    };
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& r : rec) m = std::max(m, lq_at(r));
        return m;
    }
    double acc = 0.0;  // trapezoid over snapshots
    for (std::size_t i = 0; i + 1 < rec.size(); ++i) {
        const double a = std::pow(lq_at(rec[i]), p);
        const double b = std::pow(lq_at(rec[i + 1]), p);
        acc += 0.5 * (a + b) * (rec[i + 1].t - rec[i].t);
    }
    return std::pow(acc, 1.0 / p);
}

bool admissible(double p, double q, int d) {
    if (d < 1) return false;
    if (q < 2.0) return false;
    if (d == 1) {
        if (std::isinf(q)) return std::abs(2.0 / p - 0.5) < 1e-12;
    } else if (d == 2) {
        if (std::isinf(q)) return false;
    } else {
        if (!(q < 2.0 * d / (d - 2.0))) return false;
    }
    const double delta = d * (0.5 - 1.0 / q);
    if (std::isinf(p)) return std::abs(delta) < 1e-12;
    return std::abs(2.0 / p - delta) < 1e-12;
}

}  // namespace nlsq
