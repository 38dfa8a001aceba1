#pragma once

// Avron-Herbst transport: removes a time-dependent linear potential E(t).x by
// a spatial shift and a phase, with the nested quadratures integrated to
// tolerance alongside.

#include "nlsq/time_coefficient.hpp"
#include "nlsq/wave_field.hpp"

namespace nlsq {

struct AvronHerbstPhases {
    std::array<double, 3> momentum{};  // int_0^t E_j
    std::array<double, 3> shift{};     // int_0^t int_0^tau E_j
    double action = 0.0;               // int_0^t |int_0^tau E|^2
};

AvronHerbstPhases avron_herbst_phases(const std::vector<TimeCoefficient>& efield, double t,
                                      double rtol = 1e-12);

// u(t,x) = v(t, x + shift) e^{-i x.momentum - i action/2}; Fourier translation.
WaveField avron_herbst(const WaveField& v_at_t, const std::vector<TimeCoefficient>& efield,
                       double t, const Grid& grid);

}  // namespace nlsq
