#pragma once

// Exact linear propagation for quadratic potentials via the kernel
// factorization: chirp in y, scaled Fourier transform per axis, chirp in x,
// with the (2 i pi mu_j)^(-1/2) prefactor on the continuous branch.

#include "nlsq/fundamental_pair.hpp"
#include "nlsq/wave_field.hpp"

namespace nlsq {

// Single caustic-free leg from s (the pairs' basepoint) to t. Refuses when a
// caustic band is hit, when gamma is unavailable, or when the quadratic chirp
// exceeds the grid's Nyquist budget.
WaveField mehler_apply(const WaveField& u0, const std::vector<FundamentalPair>& pairs,
                       double s, double t);

// Composition of caustic-free legs re-based at auto-selected waypoints
// (midpoint splitting between consecutive zeros of mu or mu_dot, per axis).
// Explicit waypoints may be supplied instead.
WaveField mehler_compose(const WaveField& u0, const std::vector<TimeCoefficient>& omega,
                         double s, double t, double rtol = 1e-10,
                         const std::vector<double>* waypoints = nullptr);

}  // namespace nlsq
