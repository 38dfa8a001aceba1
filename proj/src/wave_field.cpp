#include "nlsq/wave_field.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace nlsq {

namespace {
constexpr char kMagic[4] = {'W', 'F', 'L', 'D'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

bool WaveField::all_finite() const {
    for (const cplx& v : values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

WaveField gaussian_field(const Grid& g, const std::array<double, 3>& center,
                         const std::array<double, 3>& width, const std::array<double, 3>& momentum,
                         double amplitude, double time) {
    WaveField u(g, time);
    g.for_each([&](std::size_t idx, int i0, int i1, int i2) {
        const int ii[3] = {i0, i1, i2};
        double q = 0.0, ph = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            const double x = g.coord(a, ii[a]) - center[a];
            q += x * x / (2.0 * width[a] * width[a]);
            ph += momentum[a] * g.coord(a, ii[a]);
        }
        u[idx] = amplitude * std::exp(-q) * std::polar(1.0, ph);
    });
    return u;
}

void write_snapshot(const WaveField& u, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("write_snapshot: cannot open " + path);
    f.write(kMagic, 4);
    std::uint32_t words[7] = {kVersion, static_cast<std::uint32_t>(u.grid.dim()),
                              static_cast<std::uint32_t>(u.grid.points(0)),
                              static_cast<std::uint32_t>(u.grid.points(1)),
                              static_cast<std::uint32_t>(u.grid.points(2)), 0, 0};
    f.write(reinterpret_cast<const char*>(words), sizeof(words));
    for (int a = 0; a < u.grid.dim(); ++a) {
        const double L = u.grid.half_width(a);
        f.write(reinterpret_cast<const char*>(&L), sizeof(double));
    }
    f.write(reinterpret_cast<const char*>(&u.time), sizeof(double));
    f.write(reinterpret_cast<const char*>(u.values.data()),
            static_cast<std::streamsize>(u.values.size() * sizeof(cplx)));
    if (!f) throw Error("write_snapshot: write failed for " + path);
}

WaveField read_snapshot(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("read_snapshot: cannot open " + path);
    char magic[4];
    f.read(magic, 4);
    if (!f || std::memcmp(magic, kMagic, 4) != 0)
        throw Error("read_snapshot: bad magic in " + path);
    std::uint32_t words[7];
    f.read(reinterpret_cast<char*>(words), sizeof(words));
    if (!f || words[0] != kVersion) throw Error("read_snapshot: unsupported version");
    const int dim = static_cast<int>(words[1]);
    std::array<int, 3> n = {static_cast<int>(words[2]), static_cast<int>(words[3]),
                            static_cast<int>(words[4])};
    std::array<double, 3> hw{0, 0, 0};
    for (int a = 0; a < dim; ++a) f.read(reinterpret_cast<char*>(&hw[a]), sizeof(double));
    double t = 0.0;
    f.read(reinterpret_cast<char*>(&t), sizeof(double));
    WaveField u(Grid::make(dim, n, hw), t);
    f.read(reinterpret_cast<char*>(u.values.data()),
           static_cast<std::streamsize>(u.values.size() * sizeof(cplx)));
    if (!f) throw Error("read_snapshot: truncated file " + path);
    return u;
}

}  // namespace nlsq
