#pragma once

// Adaptive Dormand-Prince 5(4) integrator with the standard continuous
// extension, for small fixed-dimension systems. Accepted steps keep their
// interpolation coefficients so solutions stay densely evaluable afterwards.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "nlsq/errors.hpp"

namespace nlsq {

inline constexpr std::size_t kOdeMaxDim = 8;

using OdeState = std::array<double, kOdeMaxDim>;
using OdeRhs = std::function<void(double t, const OdeState& y, OdeState& dydt)>;

// One accepted step: y(t0 + theta*h) via the quartic interpolant
// r1 + theta*(r2 + (1-theta)*(r3 + theta*(r4 + (1-theta)*r5))).
struct OdeSegment {
    double t0 = 0.0;
    double t1 = 0.0;
    std::array<std::array<double, 5>, kOdeMaxDim> rcont{};
};

class OdeSolution {
  public:
    OdeSolution() = default;
    OdeSolution(std::size_t dim, double t_start, double t_end, std::vector<OdeSegment> segs)
        : dim_(dim), t_start_(t_start), t_end_(t_end), segments_(std::move(segs)) {}

    std::size_t dim() const { return dim_; }
    double t_start() const { return t_start_; }
    double t_end() const { return t_end_; }
    double t_min() const { return std::min(t_start_, t_end_); }
    double t_max() const { return std::max(t_start_, t_end_); }
    bool contains(double t, double slack = 1e-12) const {
        return t >= t_min() - slack && t <= t_max() + slack;
    }
    const std::vector<OdeSegment>& segments() const { return segments_; }

    void eval(double t, OdeState& out) const;
    double eval_component(double t, std::size_t i) const;

  private:
    const OdeSegment& segment_at(double t) const;

    std::size_t dim_ = 0;
    double t_start_ = 0.0;
    double t_end_ = 0.0;
    std::vector<OdeSegment> segments_;  // ordered by integration direction
};

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double max_step = 0.0;        // 0 = unlimited
    std::size_t max_steps = 2'000'000;
    // components excluded from the error norm (still integrated); bitmask
    unsigned error_exclude_mask = 0;
};

// Integrates y' = f(t, y) from t0 to t1 (either direction).
// Throws NumericsError on step-size underflow, reporting the location.
OdeSolution integrate_dopri5(const OdeRhs& f, std::size_t dim, double t0, double t1,
                             const OdeState& y0, const OdeOptions& opts = {});

// Classical fixed-step RK4; lands exactly on t0 + k*h. Used where grid-exact
// samples matter more than adaptivity (ground-state certification).
void rk4_fixed(const OdeRhs& f, std::size_t dim, double t0, double h, std::size_t n_steps,
               OdeState& y, const std::function<void(std::size_t step, double t, const OdeState&)>& on_node = {});

}  // namespace nlsq
