#pragma once

// Uniform periodic grid on [-L_j, L_j)^d, d <= 3, power-of-two point counts.

#include <array>
#include <cstddef>
#include <vector>

#include <json.hpp>

#include "nlsq/errors.hpp"

namespace nlsq {

class Grid {
  public:
    Grid() = default;
    static Grid make(int dim, const std::array<int, 3>& points,
                     const std::array<double, 3>& half_width);
    static Grid make1d(int n, double half_width) { return make(1, {n, 1, 1}, {half_width, 0, 0}); }

    int dim() const { return dim_; }
    int points(int axis) const { return n_[axis]; }
    double half_width(int axis) const { return half_width_[axis]; }
    double spacing(int axis) const { return 2.0 * half_width_[axis] / n_[axis]; }
    std::size_t size() const { return total_; }
    double cell_volume() const;

    // physical coordinate of index i along axis: -L + i*h
    double coord(int axis, int i) const { return -half_width_[axis] + spacing(axis) * i; }
    // FFT-ordered wavenumber: (pi/L)*m with m in [0, N/2) then [-N/2, 0)
    double wavenumber(int axis, int i) const {
        const int m = (i < n_[axis] / 2) ? i : i - n_[axis];
        return kPiOverL_[axis] * m;
    }
    double nyquist(int axis) const { return kPiOverL_[axis] * (n_[axis] / 2); }

    // row-major strides: index = i0*stride(0) + i1*stride(1) + i2*stride(2)
    std::size_t stride(int axis) const { return stride_[axis]; }

    bool operator==(const Grid& o) const {
        return dim_ == o.dim_ && n_ == o.n_ && half_width_ == o.half_width_;
    }

    nlohmann::json to_json() const;
    static Grid from_json(const nlohmann::json& j);

    // iterate over all points, calling f(flat_index, i0, i1, i2)
    template <typename F>
    void for_each(F&& f) const {
        std::size_t idx = 0;
        for (int i0 = 0; i0 < n_[0]; ++i0)
            for (int i1 = 0; i1 < n_[1]; ++i1)
                for (int i2 = 0; i2 < n_[2]; ++i2) f(idx++, i0, i1, i2);
    }

  private:
    int dim_ = 0;
    std::array<int, 3> n_{1, 1, 1};
    std::array<double, 3> half_width_{0, 0, 0};
    std::array<double, 3> kPiOverL_{0, 0, 0};
    std::array<std::size_t, 3> stride_{0, 0, 0};
    std::size_t total_ = 0;
};

}  // namespace nlsq
