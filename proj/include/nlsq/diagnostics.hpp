#pragma once

// Conserved/monitored quantities, evolution-law residual series, growth-regime
// fitting, and discrete mixed-norm measurement.

#include <optional>
#include <string>
#include <vector>

#include "nlsq/field_ops.hpp"
#include "nlsq/nonlinearity.hpp"
#include "nlsq/potential.hpp"

namespace nlsq {

struct DiagnosticsSelection {
    bool energy = true;
    bool virial = false;
    bool ab_laws = false;           // needs an isotropic fundamental pair
    bool pseudo_conformal = false;  // V = 0 runs only
    int hk = 0;                     // record H^1..H^hk
    int momenta = 0;                // record momentum norms 1..momenta
    bool lq_nl = false;             // record ||u||_{2 sigma + 2}
    std::vector<double> lq_list;    // extra L^q norms to record
};

struct DiagnosticsRecord {
    double t = 0.0;
    double mass = 0.0;  // L^2 norm
    double energy = 0.0;
    double energy_rhs = 0.0;  // int d_t V |u|^2
    double y = 0.0;           // variance
    double dy = 0.0;          // 2 Im int x.conj(u) grad u
    double virial_rhs = 0.0;
    std::vector<double> a_norm, b_norm;  // per axis ||A_j u||, ||B_j u||
    double theta_a = 0.0, theta_b = 0.0;  // bracketed pseudo-conformal quantities
    double ab_rhs_a = 0.0, ab_rhs_b = 0.0;
    double pc_theta = 0.0, pc_rhs = 0.0;  // V=0 law with J = x + it grad
    std::vector<double> hk;       // H^1..H^k
    std::vector<double> momenta;  // momentum norms 1..k
    double lq_nl = 0.0;
    std::vector<double> lq_extra;
    double boundary_mass = 0.0;
    double grad = 0.0;  // ||grad u||
};

enum class RunStatus { Completed, AbortedBoundaryMass, AbortedGradientCap, AbortedNonFinite };

struct SolutionTrace {
    int dim = 1;
    NonlinearitySpec nl;
    double dt = 0.0;
    int stride = 1;
    bool potential_is_zero = true;
    DiagnosticsSelection selection;
    RunStatus status = RunStatus::Completed;
    std::string abort_message;

    std::vector<DiagnosticsRecord> records;
    std::vector<WaveField> snapshots;  // populated when controls.keep_fields
    WaveField final_field;             // state at the last recorded time

    void write_csv(const std::string& path) const;
};

// One record; pair may be null unless sel.ab_laws is set (isotropic law).
DiagnosticsRecord compute_record(const WaveField& u, double t, const PotentialSampler& V,
                                 const NonlinearitySpec& nl, const FundamentalPair* pair,
                                 const DiagnosticsSelection& sel);

// E(t) = (1/2)||grad u||^2 + lambda/(sigma+1) ||u||_{2s+2}^{2s+2} + int V |u|^2
double energy(const WaveField& u, const PotentialSampler& V, const NonlinearitySpec& nl,
              double t);

struct Series {
    std::vector<double> t, v;
};

// centered-difference dE/dt minus int d_t V |u|^2, per interior snapshot
Series energy_law_residual(const SolutionTrace& trace);
// second difference of y minus the virial right-hand side
Series virial_residual(const SolutionTrace& trace);
// first-difference check of dy against the recorded momentum integral
Series moment_rate_residual(const SolutionTrace& trace);
// d/dt of the bracketed A/B quantities minus their right-hand sides
std::pair<Series, Series> ab_law_residuals(const SolutionTrace& trace);
// V=0 law with J(t) = x + it grad
Series pseudo_conformal_residual(const SolutionTrace& trace);

struct GrowthFit {
    double alg_exponent = 0.0;  // value ~ t^A
    double alg_residual = 0.0;
    double exp_rate = 0.0;      // value ~ e^{C t}
    double exp_residual = 0.0;
    std::string classification;  // "algebraic" | "exponential" | "inconclusive"
};

// Least-squares fits on the tail half of the series (both models always).
// Errors when the tail holds < 20 samples or the positive-t span is < 4x.
GrowthFit growth_fit(const Series& series);

// discrete (int ||u(t)||_q^p dt)^{1/p} over the trace; q must be recorded
// (q=2 uses mass; q in {2 sigma + 2} uses the nonlinear norm; else lq_list)
double mixed_norm(const SolutionTrace& trace, double p, double q);

// Strichartz-admissible pair: 2/p = d(1/2 - 1/q) with the dimension-dependent
// q range (q in [2, inf] if d=1, [2, inf) if d=2, [2, 2d/(d-2)) if d>=3)
bool admissible(double p, double q, int d);

}  // namespace nlsq
