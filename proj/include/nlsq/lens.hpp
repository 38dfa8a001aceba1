#pragma once

// Generalized lens transform for isotropic time-dependent quadratic
// potentials: u(t,x) = nu^{-d/2} v(mu/nu, x/nu) e^{i (nu_dot/nu) |x|^2 / 2}.

#include "nlsq/strang.hpp"

namespace nlsq {

class LensFrame {
  public:
    // Solves the isotropic fundamental pair from 0 over [t_min, t_max]
    // (t_min <= 0 <= t_max) and clips to the maximal window where nu > 0.
    static LensFrame build(const TimeCoefficient& omega, double t_min, double t_max,
                           double rtol = 1e-10);

    double t_min() const { return t_min_; }
    double t_max() const { return t_max_; }
    bool contains(double t) const { return t >= t_min_ && t <= t_max_; }

    double a(double t) const;         // nu_dot / nu
    double b(double t) const;         // nu
    double zeta(double t) const;      // mu / nu, strictly increasing
    double zeta_dot(double t) const;  // 1 / nu^2
    PairState state(double t) const;

    // monotone cubic inverse interpolation plus a Newton polish
    double zeta_inverse(double z) const;

  private:
    void check(double t) const {
        if (!contains(t))
            throw Error("LensFrame: t=" + std::to_string(t) + " outside validity window [" +
                        std::to_string(t_min_) + ", " + std::to_string(t_max_) + "]");
    }

    double t_min_ = 0.0, t_max_ = 0.0;
    FundamentalPair fwd_, bwd_;
    bool has_bwd_ = false;
    // sampled (zeta_i, t_i) with pchip slopes, for the inverse map
    std::vector<double> zs_, ts_, slope_;
};

// Band-limited evaluation of v at the uniformly scaled points x*scale of
// out_grid (exact trigonometric interpolation via the fractional transform).
// Requires matching point counts, |scale| within [1/4, 4], and the scaled
// points to stay inside v's domain.
WaveField resample_scaled(const WaveField& v, const Grid& out_grid, double scale);

// v_at_zeta must carry time tag zeta(t); result lives on out_grid at time t.
WaveField lens_forward(const WaveField& v_at_zeta, const LensFrame& frame, double t,
                       const Grid& out_grid);

// induced coupling h(t) = nu^{d sigma - 2} H(zeta(t))
double lens_h(const TimeCoefficient& H, const LensFrame& frame, int dim, int sigma, double t);

struct LensRoundtripReport {
    double zeta_t = 0.0;
    double l2_gap = 0.0;  // relative
    double h1_gap = 0.0;  // relative
};

// Solves v in the autonomous frame (coupling H), maps through the lens, solves
// u directly (potential Omega, coupling h), and reports the discrepancies.
LensRoundtripReport lens_roundtrip_check(const NonlinearitySpec& nl,
                                         const TimeCoefficient& omega, const WaveField& u0,
                                         double t, const StepControls& controls);

}  // namespace nlsq
