#pragma once

// Norms and functionals on wave fields, spectral derivatives, and the
// Heisenberg-type vector fields built from a fundamental pair.

#include "nlsq/fundamental_pair.hpp"
#include "nlsq/wave_field.hpp"

namespace nlsq {

// (sum |u|^q prod h_j)^{1/q}; q = infinity returns max |u|
double lq_norm(const WaveField& u, double q);
double l2_norm(const WaveField& u);
double l2_inner_abs(const WaveField& a, const WaveField& b);  // |<a,b>|
cplx inner(const WaveField& a, const WaveField& b);           // sum conj(a) b * vol

// (sum_{|beta|<=k} ||d^beta u||^2)^{1/2} via spectral multipliers.
// Warns on std::cerr when the top spectral shell holds > 1% of the mass.
double sobolev_norm(const WaveField& u, int k);
// (sum_{|alpha|<=k} ||x^alpha u||^2)^{1/2}
double momentum_norm(const WaveField& u, int k);
// fraction of |u_hat|^2 carried by modes with any |k_j| above frac*nyquist
double spectral_tail_fraction(const WaveField& u, double frac = 0.875);

// spectral partial derivative along axis
WaveField derivative(const WaveField& u, int axis);
// ||grad u||_{L^2}
double grad_norm(const WaveField& u);

enum class VectorFieldKind { A, B };  // A: eta = mu, B: eta = nu

// (eta_dot x_j + i eta d_j) u at time t; t must match u's time tag
WaveField apply_vector_field(const WaveField& u, const FundamentalPair& pair,
                             VectorFieldKind which, int axis, double t);

// mass in the outer 10% shell (any |x_j| > 0.9 L_j), relative to total
double boundary_shell_mass_fraction(const WaveField& u);

// variance y = int |x|^2 |u|^2 and its rate 2 Im int x.conj(u) grad u
double variance(const WaveField& u);
double variance_rate(const WaveField& u);

}  // namespace nlsq
