#include "nlsq/time_coefficient.hpp"

#include <algorithm>
#include <cmath>

namespace nlsq {

namespace {

// mu(t) = exp(1-e^t) - exp(1-e^{2t}); Omega = -mu''/mu has a removable
// singularity at t=0, evaluated by exact Taylor series on a small branch.
double double_exp_mu(double t) {
    return std::exp(1.0 - std::exp(t)) - std::exp(1.0 - std::exp(2.0 * t));
}

double double_exp_mudd(double t) {
    const double et = std::exp(t), e2t = std::exp(2.0 * t);
    const double e1 = std::exp(1.0 - et);
    const double e2 = std::exp(1.0 - e2t);
    return et * e1 * (et - 1.0) + 4.0 * e2t * e2 * (1.0 - e2t);
}

double double_exp_omega(double t) {
    if (std::abs(t) < 1e-3) {
        // series of -mu''/mu about 0
        return 7.0 + t * (15.0 / 2.0 + t * (-13.0 / 6.0 + t * (-21.0 / 2.0 +
               t * (-7907.0 / 720.0 + t * (-317.0 / 60.0)))));
    }
    return -double_exp_mudd(t) / double_exp_mu(t);
}

double double_exp_omega_dot(double t) {
    if (std::abs(t) < 1e-3) {
        return 15.0 / 2.0 + t * (-13.0 / 3.0 + t * (-63.0 / 2.0 +
               t * (-7907.0 / 180.0 + t * (-317.0 / 12.0))));
    }
    const double et = std::exp(t), e2t = std::exp(2.0 * t), e4t = e2t * e2t;
    const double e1 = std::exp(1.0 - et), e2 = std::exp(1.0 - e2t);
    const double mu = e1 - e2;
    const double mud = -et * e1 + 2.0 * e2t * e2;
    // mu'' = e^t E1 (e^t - 1) + 4 e^{2t} E2 (1 - e^{2t}) and its derivative
    const double mudd = et * e1 * (et - 1.0) + 4.0 * e2t * e2 * (1.0 - e2t);
    const double muddd = e1 * (et * (et - 1.0) * (-et) + (2.0 * et * et - et)) +
                         4.0 * e2 * ((e2t - e4t) * (-2.0 * e2t) + (2.0 * e2t - 4.0 * e4t));
    // d/dt(-mu''/mu) = -mu'''/mu + mu''*mu'/mu^2
    return -muddd / mu + mudd * mud / (mu * mu);
}

// Omega(t) = n^2 on the plateaus [4n+1, 4n+2], n = 0, 1, 2, ...; zero elsewhere.
double pulsed_value(double t) {
    if (t < 1.0) return 0.0;
    const double n = std::floor((t - 1.0) / 4.0);
    const double lo = 4.0 * n + 1.0;
    return (t <= lo + 1.0) ? n * n : 0.0;
}

}  // namespace

TimeCoefficient TimeCoefficient::constant(double value) {
    TimeCoefficient c(Kind::Constant);
    c.const_value_ = value;
    return c;
}

TimeCoefficient TimeCoefficient::table(std::vector<double> times, std::vector<double> values) {
    if (times.size() != values.size() || times.size() < 2)
        throw ConfigError("TimeCoefficient::table: need >= 2 matching samples");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw ConfigError("TimeCoefficient::table: times must be strictly increasing");

    TimeCoefficient c(Kind::Table);
    const std::size_t n = times.size();
    c.times_ = std::move(times);
    c.values_ = std::move(values);
    c.b_.assign(n, 0.0);
    c.c_.assign(n, 0.0);
    c.d_.assign(n, 0.0);
    if (n == 2) {
        c.b_[0] = c.b_[1] = (c.values_[1] - c.values_[0]) / (c.times_[1] - c.times_[0]);
        return c;
    }
    if (n == 3) {
        // not-a-knot degenerates to the single parabola through the 3 points
        const double x0 = c.times_[0], x1 = c.times_[1], x2 = c.times_[2];
        const double y0 = c.values_[0], y1 = c.values_[1], y2 = c.values_[2];
        const double q = ((y2 - y1) / (x2 - x1) - (y1 - y0) / (x1 - x0)) / (x2 - x0);
        for (std::size_t i = 0; i < 2; ++i) {
            c.b_[i] = (y1 - y0) / (x1 - x0) + q * (2.0 * c.times_[i] - x0 - x1);
            c.c_[i] = q;
            c.d_[i] = 0.0;
        }
        return c;
    }

    // natural cubic system with not-a-knot end rows, solved by full
    // tridiagonal-with-corners elimination (small n; dense is fine)
    const auto& x = c.times_;
    const auto& y = c.values_;
    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x[i + 1] - x[i];

    // unknowns: second derivatives m_i
    std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
    std::vector<double> r(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        A[i][i - 1] = h[i - 1];
        A[i][i] = 2.0 * (h[i - 1] + h[i]);
        A[i][i + 1] = h[i];
        r[i] = 6.0 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]);
    }
    // not-a-knot: third derivative continuous at x1 and x_{n-2}
    A[0][0] = h[1];
    A[0][1] = -(h[0] + h[1]);
    A[0][2] = h[0];
    A[n - 1][n - 3] = h[n - 2];
    A[n - 1][n - 2] = -(h[n - 3] + h[n - 2]);
    A[n - 1][n - 1] = h[n - 3];

    // Gaussian elimination with partial pivoting
    std::vector<double> m(n, 0.0);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t row = col + 1; row < n; ++row)
            if (std::abs(A[row][col]) > std::abs(A[piv][col])) piv = row;
        std::swap(A[col], A[piv]);
        std::swap(r[col], r[piv]);
        if (A[col][col] == 0.0) throw NumericsError("TimeCoefficient::table: singular spline system");
        for (std::size_t row = col + 1; row < n; ++row) {
            const double f = A[row][col] / A[col][col];
            if (f == 0.0) continue;
            for (std::size_t k = col; k < n; ++k) A[row][k] -= f * A[col][k];
            r[row] -= f * r[col];
        }
    }
    for (std::size_t row = n; row-- > 0;) {
        double s = r[row];
        for (std::size_t k = row + 1; k < n; ++k) s -= A[row][k] * m[k];
        m[row] = s / A[row][row];
    }

    // per-interval coefficients: s(t) = y_i + b_i dt + c_i dt^2 + d_i dt^3
    for (std::size_t i = 0; i + 1 < n; ++i) {
        c.b_[i] = (y[i + 1] - y[i]) / h[i] - h[i] * (2.0 * m[i] + m[i + 1]) / 6.0;
        c.c_[i] = m[i] / 2.0;
        c.d_[i] = (m[i + 1] - m[i]) / (6.0 * h[i]);
    }
    return c;
}

TimeCoefficient TimeCoefficient::named(const std::string& id,
                                       std::map<std::string, double> params) {
    if (id != "pulsed" && id != "double_exponential" && id != "cosine")
        throw ConfigError("TimeCoefficient::named: unknown profile '" + id + "'");
    TimeCoefficient c(Kind::Named);
    c.id_ = id;
    c.params_ = std::move(params);
    if (id == "cosine") {
        c.params_.try_emplace("amplitude", 1.0);
        c.params_.try_emplace("frequency", 1.0);
        c.params_.try_emplace("phase", 0.0);
    }
    return c;
}

double TimeCoefficient::value(double t) const {
    switch (kind_) {
        case Kind::Constant:
            return const_value_;
        case Kind::Table: {
            if (t < times_.front() - 1e-12 || t > times_.back() + 1e-12)
                throw Error("TimeCoefficient: t=" + std::to_string(t) + " outside table range");
            t = std::clamp(t, times_.front(), times_.back());
            const auto it = std::upper_bound(times_.begin(), times_.end(), t);
            const std::size_t i = std::min<std::size_t>(
                times_.size() - 2, static_cast<std::size_t>(std::max<std::ptrdiff_t>(
                                       0, std::distance(times_.begin(), it) - 1)));
            const double dt = t - times_[i];
            return values_[i] + dt * (b_[i] + dt * (c_[i] + dt * d_[i]));
        }
        case Kind::Named:
            if (id_ == "pulsed") return pulsed_value(t);
            if (id_ == "double_exponential") return double_exp_omega(t);
            // cosine
            return params_.at("amplitude") *
                   std::cos(params_.at("frequency") * t + params_.at("phase"));
    }
    return 0.0;
}

double TimeCoefficient::derivative(double t) const {
    switch (kind_) {
        case Kind::Constant:
            return 0.0;
        case Kind::Table: {
            if (t < times_.front() - 1e-12 || t > times_.back() + 1e-12)
                throw Error("TimeCoefficient: t outside table range");
            t = std::clamp(t, times_.front(), times_.back());
            const auto it = std::upper_bound(times_.begin(), times_.end(), t);
            const std::size_t i = std::min<std::size_t>(
                times_.size() - 2, static_cast<std::size_t>(std::max<std::ptrdiff_t>(
                                       0, std::distance(times_.begin(), it) - 1)));
            const double dt = t - times_[i];
            return b_[i] + dt * (2.0 * c_[i] + dt * 3.0 * d_[i]);
        }
        case Kind::Named:
            if (id_ == "pulsed") return 0.0;  // a.e.; jumps at plateau edges
            if (id_ == "double_exponential") return double_exp_omega_dot(t);
            return -params_.at("amplitude") * params_.at("frequency") *
                   std::sin(params_.at("frequency") * t + params_.at("phase"));
    }
    return 0.0;
}

bool TimeCoefficient::is_zero() const {
    return kind_ == Kind::Constant && const_value_ == 0.0;
}

nlohmann::json TimeCoefficient::to_json() const {
    nlohmann::json j;
    switch (kind_) {
        case Kind::Constant:
            j["kind"] = "constant";
            j["value"] = const_value_;
            break;
        case Kind::Table:
            j["kind"] = "table";
            j["times"] = times_;
            j["values"] = values_;
            break;
        case Kind::Named:
            j["kind"] = "named";
            j["id"] = id_;
            j["params"] = params_;
            break;
    }
    return j;
}

TimeCoefficient TimeCoefficient::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") return constant(j.at("value").get<double>());
    if (kind == "table")
        return table(j.at("times").get<std::vector<double>>(),
                     j.at("values").get<std::vector<double>>());
    if (kind == "named") {
        std::map<std::string, double> p;
        if (j.contains("params")) p = j.at("params").get<std::map<std::string, double>>();
        return named(j.at("id").get<std::string>(), std::move(p));
    }
    throw ConfigError("TimeCoefficient::from_json: unknown kind '" + kind + "'");
}

}  // namespace nlsq
