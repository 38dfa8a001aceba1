#pragma once

// Closed-form and numerically certified special solutions used as oracles.

#include "nlsq/fundamental_pair.hpp"
#include "nlsq/ground_state.hpp"
#include "nlsq/nonlinearity.hpp"
#include "nlsq/wave_field.hpp"

namespace nlsq {

// Minimal-mass blow-up family for the focusing critical equation:
// u(t,x) = mu^{-d/2} Q(|x|/mu) e^{i (mu_dot/mu) |x|^2/2 - i nu/mu}.
// Requires mu(t) > 0 and an isotropic pair.
WaveField blowup_solution(const GroundState& Q, const FundamentalPair& pair, double t,
                          const Grid& grid);

// Plateau eigenstate u(t,x) = e^{-i n d (t - t_n)/2} e^{-n |x|^2/2} of
// Omega = n^2; exact L^q norms (2 pi/(n q))^{d/(2q)}.
WaveField harmonic_gaussian(int n, int d, double t, double t_n, const Grid& grid);

struct StationaryState {
    WaveField psi;
    double omega = 0.0;     // achieved Lagrange multiplier
    double mass = 0.0;      // ||psi||_{L^2}^2
    double residual = 0.0;  // ||omega psi - H psi - lambda |psi|^{2s} psi||_{L^2}
};

// Normalized gradient flow (imaginary time, spectrally preconditioned, with a
// backtracking line search), then the mass is adjusted until the Lagrange
// multiplier hits the requested omega. Regimes: lambda>0 needs omega > d/2,
// lambda<0 needs omega < d/2, lambda=0 returns the harmonic ground state.
StationaryState nonlinear_stationary(double omega, double lambda, int sigma, int d,
                                     const Grid& grid, double tol);

}  // namespace nlsq
