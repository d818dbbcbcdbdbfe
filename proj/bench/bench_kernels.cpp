// Kernel benchmark: optimized/OpenMP paths against the serial references,
// with agreement checks. Usage: rdo_bench [grid_side ...]

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "rdo/dct.hpp"
#include "rdo/field.hpp"
#include "rdo/kernels.hpp"

using namespace rdo;

namespace {

double now() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <class F>
double time_op(F&& op, int repeats) {
    op();  // warm up
    const double t0 = now();
    for (int r = 0; r < repeats; ++r) op();
    return (now() - t0) / repeats;
}

void fill_random(double* p, int n, unsigned seed) {
    std::uint64_t state = seed;
    for (int i = 0; i < n; ++i) {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        p[i] = 2.0 * (static_cast<double>(state >> 11) * 0x1.0p-53) - 1.0;
    }
}

void bench_grid(int n) {
    const Grid g = build_grid(n, n, 1.0, 1.0);
    const int nc = g.cell_count();
    const int repeats = std::max(4, 2000000 / nc);

    ScalarField v(g), out_fast(g), out_ref(g);
    fill_random(v.data(), nc, 7);

    const double t_lap = time_op([&] { kernels::laplacian(g, v.data(), out_fast.data()); }, repeats);
    const double t_lap_ref =
        time_op([&] { kernels::laplacian_serial(g, v.data(), out_ref.data()); }, repeats);
    const double lap_diff = kernels::max_abs_diff_serial(out_fast.data(), out_ref.data(), nc);

    VectorField u(g, 1), un(g, 1);
    ScalarField vn(g), U(g, 0.1), V(g, -0.01);
    fill_random(u.component(0), nc, 11);
    const double dt = 0.45 / (50.0 * 2.0 * n * n);
    auto fast_step = [&] {
        kernels::fitzhugh_euler_step(g, 0.5, 0.02, 1.0, 0.01, 50.0, dt, u.component(0), v.data(),
                                     un.component(0), vn.data(), U.data(), V.data());
    };
    VectorField un2(g, 1);
    ScalarField vn2(g);
    auto ref_step = [&] {
        kernels::fitzhugh_euler_step_serial(g, 0.5, 0.02, 1.0, 0.01, 50.0, dt, u.component(0),
                                            v.data(), un2.component(0), vn2.data(), U.data(),
                                            V.data());
    };
    const double t_step = time_op(fast_step, repeats);
    const double t_step_ref = time_op(ref_step, repeats);
    const double step_diff =
        std::max(kernels::max_abs_diff_serial(un.component(0), un2.component(0), nc),
                 kernels::max_abs_diff_serial(vn.data(), vn2.data(), nc));

    CosineTransform2D dct(g);
    ScalarField coef(g), back(g);
    const double t_fwd = time_op([&] { dct.forward(v.data(), coef.data()); }, repeats);
    const double t_inv = time_op([&] { dct.inverse(coef.data(), back.data()); }, repeats);
    dct.inverse(coef.data(), back.data());
    double roundtrip = 0;
    for (int c = 0; c < nc; ++c) roundtrip = std::max(roundtrip, std::abs(back[c] - v[c]));

    const double t_max = time_op([&] { kernels::max_abs(v.data(), nc); }, repeats);
    const double t_max_ref = time_op([&] { kernels::max_abs_serial(v.data(), nc); }, repeats);

    std::printf("%5dx%-5d threads=%d\n", n, n, omp_get_max_threads());
    std::printf("  laplacian   %9.2f us  (serial ref %9.2f us)  bitwise diff %.1e\n",
                1e6 * t_lap, 1e6 * t_lap_ref, lap_diff);
    std::printf("  euler step  %9.2f us  (serial ref %9.2f us)  bitwise diff %.1e\n",
                1e6 * t_step, 1e6 * t_step_ref, step_diff);
    std::printf("  dct fwd/inv %9.2f us / %9.2f us   roundtrip err %.1e\n", 1e6 * t_fwd,
                1e6 * t_inv, roundtrip);
    std::printf("  max-abs     %9.2f us  (serial ref %9.2f us)\n", 1e6 * t_max, 1e6 * t_max_ref);
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> sizes;
    for (int i = 1; i < argc; ++i) sizes.push_back(std::atoi(argv[i]));
    if (sizes.empty()) sizes = {64, 128, 256};
    for (int n : sizes) bench_grid(n);
    return 0;
}
