#include "nlsq/potential.hpp"

#include <cmath>

namespace nlsq {

QuadraticPotential::QuadraticPotential(int dim, TimeCoefficient omega) : isotropic_(true) {
    if (dim < 1 || dim > 3) throw ConfigError("QuadraticPotential: bad dim");
    omega_.assign(dim, omega);
}

QuadraticPotential::QuadraticPotential(std::vector<TimeCoefficient> omega_per_axis,
                                       std::vector<TimeCoefficient> efield)
    : omega_(std::move(omega_per_axis)), efield_(std::move(efield)), isotropic_(false) {
    if (omega_.empty() || omega_.size() > 3)
        throw ConfigError("QuadraticPotential: need 1..3 Omega components");
    if (!efield_.empty() && efield_.size() != omega_.size())
        throw ConfigError("QuadraticPotential: E-field dimension mismatch");
    if (omega_.size() == 1) isotropic_ = true;
}

bool QuadraticPotential::is_zero() const {
    for (const auto& o : omega_)
        if (!o.is_zero()) return false;
    for (const auto& e : efield_)
        if (!e.is_zero()) return false;
    return true;
}

double QuadraticPotential::max_abs_omega(double t) const {
    double m = 0.0;
    for (const auto& o : omega_) m = std::max(m, std::abs(o.value(t)));
    return m;
}

void QuadraticPotential::fill(double t, const Grid& g, double* out) const {
    if (g.dim() != dim()) throw Error("QuadraticPotential::fill: grid dimension mismatch");
    double om[3] = {0, 0, 0}, ef[3] = {0, 0, 0};
    for (int a = 0; a < dim(); ++a) {
        om[a] = omega_[a].value(t);
        ef[a] = efield_.empty() ? 0.0 : efield_[a].value(t);
    }
    g.for_each([&](std::size_t idx, int i0, int i1, int i2) {
        const int ii[3] = {i0, i1, i2};
        double v = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            const double x = g.coord(a, ii[a]);
            v += 0.5 * om[a] * x * x + ef[a] * x;
        }
        out[idx] = v;
    });
}

void QuadraticPotential::fill_dt(double t, const Grid& g, double* out) const {
    double om[3] = {0, 0, 0}, ef[3] = {0, 0, 0};
    for (int a = 0; a < dim(); ++a) {
        om[a] = omega_[a].derivative(t);
        ef[a] = efield_.empty() ? 0.0 : efield_[a].derivative(t);
    }
    g.for_each([&](std::size_t idx, int i0, int i1, int i2) {
        const int ii[3] = {i0, i1, i2};
        double v = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            const double x = g.coord(a, ii[a]);
            v += 0.5 * om[a] * x * x + ef[a] * x;
        }
        out[idx] = v;
    });
}

void QuadraticPotential::fill_xgradv(double t, const Grid& g, double* out) const {
    double om[3] = {0, 0, 0}, ef[3] = {0, 0, 0};
    for (int a = 0; a < dim(); ++a) {
        om[a] = omega_[a].value(t);
        ef[a] = efield_.empty() ? 0.0 : efield_[a].value(t);
    }
    g.for_each([&](std::size_t idx, int i0, int i1, int i2) {
        const int ii[3] = {i0, i1, i2};
        double v = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            const double x = g.coord(a, ii[a]);
            v += om[a] * x * x + ef[a] * x;
        }
        out[idx] = v;
    });
}

}  // namespace nlsq
