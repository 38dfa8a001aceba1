#pragma once

// Strang split-step solver for i u_t + (1/2) Lap u = V(t,x) u + coupling |u|^{2s} u.
// The physical substep is a pointwise exact exponential (the modulus is
// invariant under it), the kinetic substep a Fourier multiplier.

#include "nlsq/diagnostics.hpp"
#include "nlsq/mehler.hpp"

namespace nlsq {

SolutionTrace strang_propagate(const WaveField& u0, const PotentialSampler& V,
                               const NonlinearitySpec& nl, double s, double t_end,
                               const StepControls& controls,
                               const DiagnosticsSelection& sel = {},
                               const FundamentalPair* pair = nullptr);

}  // namespace nlsq
