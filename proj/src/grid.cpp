#include "nlsq/grid.hpp"

namespace nlsq {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

Grid Grid::make(int dim, const std::array<int, 3>& points,
                const std::array<double, 3>& half_width) {
    if (dim < 1 || dim > 3) throw ConfigError("Grid: dim must be 1, 2 or 3");
    Grid g;
    g.dim_ = dim;
    for (int a = 0; a < 3; ++a) {
        if (a < dim) {
            if (!is_pow2(points[a]) || points[a] < 8)
                throw ConfigError("Grid: N_j must be a power of two >= 8");
            if (!(half_width[a] > 0.0)) throw ConfigError("Grid: L_j must be > 0");
            g.n_[a] = points[a];
            g.half_width_[a] = half_width[a];
            g.kPiOverL_[a] = kPi / half_width[a];
        } else {
            g.n_[a] = 1;
            g.half_width_[a] = 0.0;
            g.kPiOverL_[a] = 0.0;
        }
    }
    g.total_ = static_cast<std::size_t>(g.n_[0]) * g.n_[1] * g.n_[2];
    g.stride_[2] = 1;
    g.stride_[1] = static_cast<std::size_t>(g.n_[2]);
    g.stride_[0] = static_cast<std::size_t>(g.n_[1]) * g.n_[2];
    return g;
}

double Grid::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim_; ++a) v *= spacing(a);
    return v;
}

nlohmann::json Grid::to_json() const {
    std::vector<int> pts(n_.begin(), n_.begin() + dim_);
    std::vector<double> hw(half_width_.begin(), half_width_.begin() + dim_);
    return {{"points", pts}, {"half_width", hw}};
}

Grid Grid::from_json(const nlohmann::json& j) {
    const auto pts = j.at("points").get<std::vector<int>>();
    const auto hw = j.at("half_width").get<std::vector<double>>();
    if (pts.size() != hw.size() || pts.empty() || pts.size() > 3)
        throw ConfigError("Grid: points/half_width must have matching size 1..3");
    std::array<int, 3> p{1, 1, 1};
    std::array<double, 3> h{0, 0, 0};
    for (std::size_t a = 0; a < pts.size(); ++a) {
        p[a] = pts[a];
        h[a] = hw[a];
    }
    return make(static_cast<int>(pts.size()), p, h);
}

}  // namespace nlsq
