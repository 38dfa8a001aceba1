#include "nlsq/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace nlsq::fft {

namespace {

std::mutex g_planner_mutex;

using PlanKey = std::tuple<int, int, int, int>;  // n0, n1, n2, sign
std::map<PlanKey, fftw_plan>& plan_cache() {
    static std::map<PlanKey, fftw_plan> cache;
    return cache;
}

fftw_plan get_plan(int n0, int n1, int n2, int sign) {
    std::lock_guard<std::mutex> lock(g_planner_mutex);
    const PlanKey key{n0, n1, n2, sign};
    auto& cache = plan_cache();
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    // rank-collapsed dims (drop trailing 1s)
    int dims[3] = {n0, n1, n2};
    int rank = 3;
    while (rank > 1 && dims[rank - 1] == 1) --rank;

    std::vector<fftw_complex> dummy(static_cast<std::size_t>(n0) * n1 * n2);
    fftw_plan p = fftw_plan_dft(rank, dims, dummy.data(), dummy.data(), sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw NumericsError("fftw: plan creation failed");
    cache.emplace(key, p);
    return p;
}

fftw_plan get_plan_1d(int n, int sign) { return get_plan(n, 1, 1, sign); }

}  // namespace

void forward(const Grid& g, cplx* data) {
    fftw_plan p = get_plan(g.points(0), g.points(1), g.points(2), FFTW_FORWARD);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
}

void inverse(const Grid& g, cplx* data) {
    fftw_plan p = get_plan(g.points(0), g.points(1), g.points(2), FFTW_BACKWARD);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
    const double inv = 1.0 / static_cast<double>(g.size());
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i) data[i] *= inv;
}

void scaled_ft_axis(const Grid& g, cplx* data, int axis, double theta) {
    const int N = g.points(axis);
    const int M = 2 * N;
    const std::size_t stride = g.stride(axis);

    // chirps with symmetric index a_k = k - N/2
    std::vector<cplx> chirp(N);   // e^{-i theta a_k^2 / 2}
    for (int k = 0; k < N; ++k) {
        const double a = k - N / 2;
        chirp[k] = std::polar(1.0, -0.5 * theta * a * a);
    }
    // circular kernel z_j = e^{+i theta j^2/2}, j = m-n in (-N, N)
    std::vector<cplx> Z(M, cplx(0.0, 0.0));
    for (int j = 0; j < N; ++j) {
        const cplx z = std::polar(1.0, 0.5 * theta * static_cast<double>(j) * j);
        Z[j] = z;
        if (j > 0) Z[M - j] = z;
    }
    fftw_plan plan_f = get_plan_1d(M, FFTW_FORWARD);
    fftw_plan plan_b = get_plan_1d(M, FFTW_BACKWARD);
    fftw_execute_dft(plan_f, reinterpret_cast<fftw_complex*>(Z.data()),
                     reinterpret_cast<fftw_complex*>(Z.data()));

    // enumerate lines along `axis`
    const int na = g.points(axis);
    int other[2], no = 0;
    for (int a = 0; a < 3; ++a)
        if (a != axis) other[no++] = a;

    std::vector<cplx> buf(M);
    const double invM = 1.0 / M;
    for (int p = 0; p < g.points(other[0]); ++p) {
        for (int q = 0; q < g.points(other[1]); ++q) {
            const std::size_t base = static_cast<std::size_t>(p) * g.stride(other[0]) +
                                     static_cast<std::size_t>(q) * g.stride(other[1]);
            for (int n = 0; n < na; ++n) buf[n] = data[base + n * stride] * chirp[n];
            std::fill(buf.begin() + na, buf.end(), cplx(0.0, 0.0));
            fftw_execute_dft(plan_f, reinterpret_cast<fftw_complex*>(buf.data()),
                             reinterpret_cast<fftw_complex*>(buf.data()));
            for (int k = 0; k < M; ++k) buf[k] *= Z[k];
            fftw_execute_dft(plan_b, reinterpret_cast<fftw_complex*>(buf.data()),
                             reinterpret_cast<fftw_complex*>(buf.data()));
            for (int m = 0; m < na; ++m)
                data[base + m * stride] = buf[m] * chirp[m] * invM;
        }
    }
}

}  // namespace nlsq::fft
