#pragma once

// FFTW-backed transforms. Plans use FFTW_ESTIMATE only (deterministic plan
// selection) and are cached behind a mutex; execution is thread-safe on
// distinct buffers.

#include "nlsq/wave_field.hpp"

namespace nlsq::fft {

// unnormalized forward DFT, sum_n x_n e^{-i k x_n} ordering per Grid::wavenumber
void forward(const Grid& g, cplx* data);
// inverse DFT including the 1/prod(N) normalization
void inverse(const Grid& g, cplx* data);

inline void forward(WaveField& u) { forward(u.grid, u.values.data()); }
inline void inverse(WaveField& u) { inverse(u.grid, u.values.data()); }

// In-place along one axis: out_m = sum_n in_n exp(-i*theta*(m-N/2)*(n-N/2)).
// Exact for any real theta (Bluestein factorization, length-2N FFTs).
void scaled_ft_axis(const Grid& g, cplx* data, int axis, double theta);

}  // namespace nlsq::fft
