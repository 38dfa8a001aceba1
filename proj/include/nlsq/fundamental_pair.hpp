#pragma once

// Fundamental solutions (mu, nu) of eta'' + Omega_j(t) eta = 0 with
// mu(s)=0, mu'(s)=1, nu(s)=1, nu'(s)=0, densely evaluable, plus the
// Mehler kernel coefficients built from them.

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "nlsq/ode.hpp"
#include "nlsq/time_coefficient.hpp"

namespace nlsq {

struct PairState {
    double mu = 0.0;
    double mu_dot = 0.0;
    double nu = 0.0;
    double nu_dot = 0.0;
};

// |mu| below this at time t (relative to basepoint s) counts as a caustic.
inline double caustic_band(double t, double s) { return 1e-8 * (1.0 + std::abs(t - s)); }

class FundamentalPair {
  public:
    FundamentalPair() = default;

    int axis() const { return axis_; }
    double s() const { return s_; }
    double t_end() const { return t_end_; }
    double tol() const { return tol_; }
    bool contains(double t) const { return ode_.contains(t, 1e-9 * (1.0 + std::abs(t))); }

    PairState eval(double t) const;
    double mu(double t) const { return ode_.eval_component(t, 0); }
    double mu_dot(double t) const { return ode_.eval_component(t, 1); }
    double nu(double t) const { return ode_.eval_component(t, 2); }
    double nu_dot(double t) const { return ode_.eval_component(t, 3); }

    // Accumulated integral of Omega/mu_dot^2 from s; unavailable at/past the
    // first zero-crossing of mu_dot (sign-monitored during the solve).
    bool gamma_available(double t) const;
    double gamma_integral(double t) const;
    // time of first mu_dot crossing in integration direction (NaN if none)
    double mu_dot_crossing() const { return mu_dot_crossing_; }

    const OdeSolution& ode() const { return ode_; }

    friend FundamentalPair solve_fundamental(const TimeCoefficient& omega, double s,
                                             double t_end, double rtol, int axis);

  private:
    int axis_ = 0;
    double s_ = 0.0;
    double t_end_ = 0.0;
    double tol_ = 1e-10;
    double mu_dot_crossing_ = std::numeric_limits<double>::quiet_NaN();
    OdeSolution ode_;  // components: mu, mu_dot, nu, nu_dot, gamma integral
};

FundamentalPair solve_fundamental(const TimeCoefficient& omega, double s, double t_end,
                                  double rtol = 1e-10, int axis = 0);

std::vector<FundamentalPair> solve_fundamental(const std::vector<TimeCoefficient>& omega,
                                               double s, double t_end, double rtol = 1e-10);

// nu*mu_dot - mu*nu_dot - 1 at t; a diagnostic, never corrected.
double wronskian_residual(const FundamentalPair& pair, double t);

struct MehlerCoefficients {
    double alpha = 0.0;  // mu_dot/mu
    double beta = 0.0;   // -1/mu
    double gamma = 0.0;  // 1/(mu*mu_dot) - integral(Omega/mu_dot^2)
    std::complex<double> prefactor;  // (2*i*pi*mu)^(-1/2), continuous branch
    PairState state;
};

// Fails with CausticError when |mu(t)| is inside the caustic band, and with
// GammaUnavailableError when mu_dot vanished on the integration path.
MehlerCoefficients mehler_coefficients(const FundamentalPair& pair, double t);

// All sign changes of mu in [t_lo, t_hi], located by bisection.
std::vector<double> caustic_times(const FundamentalPair& pair, double t_lo, double t_hi);

struct TaggedCaustic {
    double t;
    int axis;
};
std::vector<TaggedCaustic> caustic_times(const std::vector<FundamentalPair>& pairs,
                                         double t_lo, double t_hi);

struct StructuralReport {
    double envelope_C = 0.0;      // fitted C with |mu|+|mu'|+|nu|+|nu'| <= C e^{C|t-s|}
    bool omega_nonpositive = false;
    bool nu_ge_one = false;       // the four Lemma-type pointwise bounds,
    bool mu_ge_elapsed = false;   // meaningful when omega_nonpositive
    bool nu_dot_ge_zero = false;
    bool mu_dot_ge_one = false;
};

StructuralReport structural_checks(const FundamentalPair& pair, const TimeCoefficient& omega,
                                   double t_lo, double t_hi);

}  // namespace nlsq
