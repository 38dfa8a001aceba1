#pragma once

// Potential samplers. The solver accepts any sampler; the quadratic one
// (1/2) sum Omega_j(t) x_j^2 + E(t).x additionally exposes the analytic
// d_t V and x.grad V needed by the evolution-law diagnostics.

#include <algorithm>
#include <memory>
#include <vector>

#include "nlsq/grid.hpp"
#include "nlsq/time_coefficient.hpp"

namespace nlsq {

class PotentialSampler {
  public:
    virtual ~PotentialSampler() = default;
    virtual void fill(double t, const Grid& g, double* out) const = 0;
    virtual bool is_zero() const { return false; }
};

class ZeroPotential final : public PotentialSampler {
  public:
    void fill(double, const Grid& g, double* out) const override {
        std::fill(out, out + g.size(), 0.0);
    }
    bool is_zero() const override { return true; }
};

class QuadraticPotential final : public PotentialSampler {
  public:
    QuadraticPotential() = default;  // V = 0
    // isotropic: one Omega shared by all axes
    QuadraticPotential(int dim, TimeCoefficient omega);
    QuadraticPotential(std::vector<TimeCoefficient> omega_per_axis,
                       std::vector<TimeCoefficient> efield = {});

    void fill(double t, const Grid& g, double* out) const override;
    bool is_zero() const override;

    void fill_dt(double t, const Grid& g, double* out) const;     // (1/2) sum Omega'_j x_j^2 + E'.x
    void fill_xgradv(double t, const Grid& g, double* out) const;  // sum Omega_j x_j^2 + E.x

    int dim() const { return static_cast<int>(omega_.size()); }
    bool isotropic() const { return isotropic_; }
    bool has_efield() const { return !efield_.empty(); }
    const TimeCoefficient& omega(int axis) const { return omega_.at(axis); }
    const std::vector<TimeCoefficient>& omegas() const { return omega_; }
    const std::vector<TimeCoefficient>& efield() const { return efield_; }
    double max_abs_omega(double t) const;

  private:
    std::vector<TimeCoefficient> omega_;
    std::vector<TimeCoefficient> efield_;
    bool isotropic_ = true;
};

}  // namespace nlsq
