#pragma once

// Gauge-invariant power nonlinearity lambda |u|^{2 sigma} u, optionally with a
// time-dependent coupling h(t) in place of lambda, and the autonomous-frame
// coupling H(t) used by the lens transform.

#include <optional>

#include "nlsq/time_coefficient.hpp"

namespace nlsq {

struct NonlinearitySpec {
    double lambda = 0.0;
    int sigma = 1;
    std::optional<TimeCoefficient> h;  // overrides lambda when present
    std::optional<TimeCoefficient> H;  // autonomous-frame coupling (lens)

    double coupling(double t) const { return h ? h->value(t) : lambda; }
    bool autonomous() const { return !h.has_value(); }
    bool active() const { return h.has_value() || lambda != 0.0; }

    // sigma in {1,2}, sigma=1 forced in d=3, at most one of {lambda, h}
    void validate(int dim) const {
        if (sigma != 1 && sigma != 2) throw ConfigError("NonlinearitySpec: sigma must be 1 or 2");
        if (dim == 3 && sigma != 1)
            throw ConfigError("NonlinearitySpec: sigma=1 required in d=3");
        if (h.has_value() && lambda != 0.0)
            throw ConfigError("NonlinearitySpec: lambda and h are mutually exclusive");
    }
};

struct StepControls {
    double dt = 1e-3;
    int snapshot_stride = 10;
    enum class Scheme { Strang, MehlerLinear } scheme = Scheme::Strang;
    double boundary_mass_cap = 1e-6;  // abort when outer-shell mass exceeds this
    double gradient_cap = 0.0;        // abort when ||grad u|| exceeds this (0 = off)
    bool keep_fields = false;         // retain a field copy at every snapshot
};

}  // namespace nlsq
