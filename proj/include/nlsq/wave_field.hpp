#pragma once

// Complex field on a periodic grid, value-like, time-tagged.

#include <complex>
#include <string>
#include <vector>

#include "nlsq/grid.hpp"

namespace nlsq {

using cplx = std::complex<double>;

struct WaveField {
    Grid grid;
    double time = 0.0;
    std::vector<cplx> values;

    WaveField() = default;
    explicit WaveField(const Grid& g, double t = 0.0) : grid(g), time(t), values(g.size()) {}

    cplx& operator[](std::size_t i) { return values[i]; }
    const cplx& operator[](std::size_t i) const { return values[i]; }

    bool all_finite() const;
};

// Builds u(x) = amp * exp(-sum (x_j-c_j)^2/(2 w_j^2) + i p.x)
WaveField gaussian_field(const Grid& g, const std::array<double, 3>& center,
                         const std::array<double, 3>& width, const std::array<double, 3>& momentum,
                         double amplitude = 1.0, double time = 0.0);

// Snapshot file: 32-byte header (magic "WFLD", version, d, N_j x3, 2 reserved
// words, all u32 little-endian), then d x f64 half-widths, f64 time tag,
// interleaved (re, im) f64 row-major.
void write_snapshot(const WaveField& u, const std::string& path);
WaveField read_snapshot(const std::string& path);

}  // namespace nlsq
