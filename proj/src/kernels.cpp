#include "rdo/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace rdo::kernels {

namespace {

// 8 independent accumulator lanes so the compiler can vectorize the max chain.
template <class Fetch>
double max_lanes(int n, Fetch fetch) {
    double lane[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    int i = 0;
    for (; i + 8 <= n; i += 8)
        for (int l = 0; l < 8; ++l) {
            const double x = fetch(i + l);
            lane[l] = lane[l] > x ? lane[l] : x;
        }
    double m = 0;
    for (; i < n; ++i) {
        const double x = fetch(i);
        m = m > x ? m : x;
    }
    for (int l = 0; l < 8; ++l) m = m > lane[l] ? m : lane[l];
    return m;
}

}  // namespace

double max_abs_serial(const double* a, int n) {
    double m = 0;
    for (int i = 0; i < n; ++i) m = std::max(m, std::abs(a[i]));
    return m;
}

double max_abs(const double* a, int n) {
    if (n < parallel_threshold)
        return max_lanes(n, [a](int i) { return std::abs(a[i]); });
    double m = 0;
#pragma omp parallel for schedule(static) reduction(max : m)
    for (int b = 0; b < n; b += sum_block) {
        const int len = std::min(sum_block, n - b);
        const double* p = a + b;
        const double local = max_lanes(len, [p](int i) { return std::abs(p[i]); });
        m = m > local ? m : local;
    }
    return m;
}

double max_abs_diff_serial(const double* a, const double* b, int n) {
    double m = 0;
    for (int i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_abs_diff(const double* a, const double* b, int n) {
    if (n < parallel_threshold)
        return max_lanes(n, [a, b](int i) { return std::abs(a[i] - b[i]); });
    double m = 0;
#pragma omp parallel for schedule(static) reduction(max : m)
    for (int blk = 0; blk < n; blk += sum_block) {
        const int len = std::min(sum_block, n - blk);
        const double* pa = a + blk;
        const double* pb = b + blk;
        const double local = max_lanes(len, [pa, pb](int i) { return std::abs(pa[i] - pb[i]); });
        m = m > local ? m : local;
    }
    return m;
}

double sum_serial(const double* a, int n) {
    double s = 0;
    for (int i = 0; i < n; ++i) s += a[i];
    return s;
}

double sum(const double* a, int n) {
    const int nblocks = (n + sum_block - 1) / sum_block;
    if (nblocks <= 1) return sum_serial(a, n);
    std::vector<double> partial(nblocks);
#pragma omp parallel for schedule(static) if (n >= parallel_threshold)
    for (int b = 0; b < nblocks; ++b) {
        const int lo = b * sum_block;
        partial[b] = sum_serial(a + lo, std::min(sum_block, n - lo));
    }
    double s = 0;
    for (int b = 0; b < nblocks; ++b) s += partial[b];
    return s;
}

double sum_abs_pow_serial(const double* a, int n, double p) {
    double s = 0;
    for (int i = 0; i < n; ++i) s += std::pow(std::abs(a[i]), p);
    return s;
}

double sum_abs_pow(const double* a, int n, double p) {
    const int nblocks = (n + sum_block - 1) / sum_block;
    if (nblocks <= 1) return sum_abs_pow_serial(a, n, p);
    std::vector<double> partial(nblocks);
#pragma omp parallel for schedule(static) if (n >= parallel_threshold)
    for (int b = 0; b < nblocks; ++b) {
        const int lo = b * sum_block;
        partial[b] = sum_abs_pow_serial(a + lo, std::min(sum_block, n - lo), p);
    }
    double s = 0;
    for (int b = 0; b < nblocks; ++b) s += partial[b];
    return s;
}

void laplacian_serial(const Grid& g, const double* v, double* out) {
    const int nx = g.nx, ny = g.ny;
    const double ihx2 = 1.0 / (g.hx * g.hx);
    const double ihy2 = 1.0 / (g.hy * g.hy);
    for (int j = 0; j < ny; ++j) {
        const int jm = j == 0 ? 0 : j - 1;
        const int jp = j == ny - 1 ? ny - 1 : j + 1;
        for (int i = 0; i < nx; ++i) {
            const int im = i == 0 ? 0 : i - 1;
            const int ip = i == nx - 1 ? nx - 1 : i + 1;
            const double c = v[j * nx + i];
            out[j * nx + i] = (v[j * nx + im] + v[j * nx + ip] - 2.0 * c) * ihx2 +
                              (v[jm * nx + i] + v[jp * nx + i] - 2.0 * c) * ihy2;
        }
    }
}

namespace {

inline void laplacian_row(const double* vr, const double* vm, const double* vp, double* out,
                          int nx, double ihx2, double ihy2) {
    for (int i = 1; i < nx - 1; ++i)
        out[i] = (vr[i - 1] + vr[i + 1] - 2.0 * vr[i]) * ihx2 +
                 (vm[i] + vp[i] - 2.0 * vr[i]) * ihy2;
    out[0] = (vr[1] - vr[0]) * ihx2 + (vm[0] + vp[0] - 2.0 * vr[0]) * ihy2;
    out[nx - 1] = (vr[nx - 2] - vr[nx - 1]) * ihx2 +
                  (vm[nx - 1] + vp[nx - 1] - 2.0 * vr[nx - 1]) * ihy2;
}

}  // namespace

void laplacian(const Grid& g, const double* v, double* out) {
    const int nx = g.nx, ny = g.ny;
    const double ihx2 = 1.0 / (g.hx * g.hx);
    const double ihy2 = 1.0 / (g.hy * g.hy);
    // separate plain loop below the threshold: the OpenMP outlining costs more
    // than it buys on small grids
    if (g.cell_count() < parallel_threshold) {
        for (int j = 0; j < ny; ++j) {
            const int jm = j == 0 ? 0 : j - 1;
            const int jp = j == ny - 1 ? ny - 1 : j + 1;
            laplacian_row(v + j * nx, v + jm * nx, v + jp * nx, out + j * nx, nx, ihx2, ihy2);
        }
        return;
    }
#pragma omp parallel for schedule(static)
    for (int j = 0; j < ny; ++j) {
        const int jm = j == 0 ? 0 : j - 1;
        const int jp = j == ny - 1 ? ny - 1 : j + 1;
        laplacian_row(v + j * nx, v + jm * nx, v + jp * nx, out + j * nx, nx, ihx2, ihy2);
    }
}

FitzhughStepResult fitzhugh_euler_step_serial(const Grid& g, double beta, double sigma,
                                              double delta, double rho, double gamma, double dt,
                                              const double* u, const double* v, double* un,
                                              double* vn, const double* ref_u,
                                              const double* ref_v) {
    const int nx = g.nx, ny = g.ny, nc = nx * ny;
    const double ihx2 = 1.0 / (g.hx * g.hx);
    const double ihy2 = 1.0 / (g.hy * g.hy);
    for (int j = 0; j < ny; ++j) {
        const int jm = j == 0 ? 0 : j - 1;
        const int jp = j == ny - 1 ? ny - 1 : j + 1;
        for (int i = 0; i < nx; ++i) {
            const int im = i == 0 ? 0 : i - 1;
            const int ip = i == nx - 1 ? nx - 1 : i + 1;
            const int c = j * nx + i;
            const double vv = v[c], uu = u[c];
            const double lap = (v[j * nx + im] + v[j * nx + ip] - 2.0 * vv) * ihx2 +
                               (v[jm * nx + i] + v[jp * nx + i] - 2.0 * vv) * ihy2;
            un[c] = uu + dt * (uu * (1.0 - uu) * (uu - beta) - vv);
            vn[c] = vv + dt * (gamma * lap + sigma * uu - delta * vv - rho);
        }
    }
    FitzhughStepResult r;
    r.du_max = ref_u ? max_abs_diff_serial(un, ref_u, nc) : max_abs_serial(un, nc);
    r.dv_max = ref_v ? max_abs_diff_serial(vn, ref_v, nc) : max_abs_serial(vn, nc);
    r.finite = r.du_max < blow_up_threshold && r.dv_max < blow_up_threshold;
    return r;
}

namespace {

// One row of the fused step; boundary columns handled separately so the
// interior loop stays branch-free and vectorizes.
inline void fitzhugh_step_row(const double* __restrict ur, const double* __restrict vr,
                              const double* __restrict vm, const double* __restrict vp,
                              double* __restrict unr, double* __restrict vnr, int nx, double beta,
                              double sigma, double delta, double rho, double dtg, double dt,
                              double ihx2, double ihy2) {
    for (int i = 1; i < nx - 1; ++i) {
        const double vv = vr[i], uu = ur[i];
        const double lap =
            (vr[i - 1] + vr[i + 1] - 2.0 * vv) * ihx2 + (vm[i] + vp[i] - 2.0 * vv) * ihy2;
        unr[i] = uu + dt * (uu * (1.0 - uu) * (uu - beta) - vv);
        vnr[i] = vv + dtg * lap + dt * (sigma * uu - delta * vv - rho);
    }
    for (const int i : {0, nx - 1}) {
        const int im = i == 0 ? 0 : i - 1;
        const int ip = i == nx - 1 ? nx - 1 : i + 1;
        const double vv = vr[i], uu = ur[i];
        const double lap = (vr[im] + vr[ip] - 2.0 * vv) * ihx2 + (vm[i] + vp[i] - 2.0 * vv) * ihy2;
        unr[i] = uu + dt * (uu * (1.0 - uu) * (uu - beta) - vv);
        vnr[i] = vv + dtg * lap + dt * (sigma * uu - delta * vv - rho);
    }
}

}  // namespace

FitzhughStepResult fitzhugh_euler_step(const Grid& g, double beta, double sigma, double delta,
                                       double rho, double gamma, double dt, const double* u,
                                       const double* v, double* un, double* vn,
                                       const double* ref_u, const double* ref_v) {
    const int nx = g.nx, ny = g.ny, nc = nx * ny;
    const double ihx2 = 1.0 / (g.hx * g.hx);
    const double ihy2 = 1.0 / (g.hy * g.hy);
    const double dtg = dt * gamma;
    if (nc < parallel_threshold) {
        for (int j = 0; j < ny; ++j) {
            const int jm = j == 0 ? 0 : j - 1;
            const int jp = j == ny - 1 ? ny - 1 : j + 1;
            fitzhugh_step_row(u + j * nx, v + j * nx, v + jm * nx, v + jp * nx, un + j * nx,
                              vn + j * nx, nx, beta, sigma, delta, rho, dtg, dt, ihx2, ihy2);
        }
    } else {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < ny; ++j) {
            const int jm = j == 0 ? 0 : j - 1;
            const int jp = j == ny - 1 ? ny - 1 : j + 1;
            fitzhugh_step_row(u + j * nx, v + j * nx, v + jm * nx, v + jp * nx, un + j * nx,
                              vn + j * nx, nx, beta, sigma, delta, rho, dtg, dt, ihx2, ihy2);
        }
    }
    FitzhughStepResult r;
    r.du_max = ref_u ? max_abs_diff(un, ref_u, nc) : max_abs(un, nc);
    r.dv_max = ref_v ? max_abs_diff(vn, ref_v, nc) : max_abs(vn, nc);
    // The reference fields are bounded stationary profiles, so the deviation
    // sup-norms bound the raw magnitudes up to O(1); values cross the 1e8 gate
    // long before inf/NaN can appear. NaN fails the < and flags as non-finite.
    r.finite = r.du_max < blow_up_threshold && r.dv_max < blow_up_threshold;
    return r;
}

}  // namespace rdo::kernels
