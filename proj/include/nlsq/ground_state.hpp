#pragma once

// Ground state Q of -(1/2) Lap Q + Q = Q^{1+4/d}: positive, radial, decaying.
// Radial shooting with bisection on Q(0); the stored profile is re-integrated
// with a fixed-step RK4 landing exactly on the grid nodes, and the residual is
// certified by high-order finite differences independent of the integrator.

#include <string>
#include <vector>

#include "nlsq/errors.hpp"

namespace nlsq {

class GroundState {
  public:
    int dim() const { return dim_; }
    double power() const { return power_; }  // 1 + 4/d
    double q0() const { return q_[0]; }
    double r_max() const { return dr_ * (static_cast<double>(q_.size()) - 1.0); }
    double dr() const { return dr_; }
    const std::vector<double>& samples() const { return q_; }
    double residual_bound() const { return residual_; }

    // cubic interpolation on the grid, exponential continuation beyond r_max
    double eval(double r) const;

    static GroundState compute(int d, double tol);
    // disk cache keyed by (d, tol); recomputes and stores on miss
    static GroundState cached(int d, double tol, const std::string& cache_dir);

    void save(const std::string& path) const;
    static GroundState load(const std::string& path);

  private:
    int dim_ = 1;
    double power_ = 5.0;
    double dr_ = 0.0;
    double tol_ = 0.0;
    double residual_ = 0.0;
    std::vector<double> q_;
};

}  // namespace nlsq
