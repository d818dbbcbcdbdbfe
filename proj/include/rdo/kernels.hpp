#pragma once

#include <cstddef>

#include "rdo/grid.hpp"

// Low-level array kernels. Each has a plain serial reference version and an
// optimized/OpenMP version; the optimized ones are the library's execution
// path, the serial ones are kept as references for tests and the benchmark.
//
// Determinism contract: elementwise kernels and max-reductions are bitwise
// identical for any thread count. Summations use fixed-size blocks combined
// in index order: bitwise identical for any thread count as well.

namespace rdo::kernels {

// OpenMP engages above this cell count; below it, parallel-region overhead
// dominates on small grids.
inline constexpr int parallel_threshold = 1 << 16;

inline constexpr int sum_block = 4096;

double max_abs_serial(const double* a, int n);
double max_abs(const double* a, int n);

double max_abs_diff_serial(const double* a, const double* b, int n);
double max_abs_diff(const double* a, const double* b, int n);

double sum_serial(const double* a, int n);
/// Blocked deterministic sum (fixed 4096-element blocks, combined in order).
double sum(const double* a, int n);

double sum_abs_pow_serial(const double* a, int n, double p);
double sum_abs_pow(const double* a, int n, double p);

void laplacian_serial(const Grid& g, const double* v, double* out);
/// 5-point Neumann (mirror ghost) Laplacian; 3-point in x when ny == 1.
void laplacian(const Grid& g, const double* v, double* out);

struct FitzhughStepResult {
    double du_max = 0;   // max |u_new - ref_u| (or max |u_new| without reference)
    double dv_max = 0;
    bool finite = true;  // false if any |value| > blow_up_threshold or non-finite
};

inline constexpr double blow_up_threshold = 1e8;

/// One fused explicit Euler step of the FitzHugh-Nagumo-type system:
///   u <- u + dt*(u(1-u)(u-beta) - v),  v <- v + dt*(gamma*lap(v) + sigma*u - delta*v - rho)
/// writing into (un, vn) and tracking sup-norm deviations against (ref_u, ref_v)
/// (pass nullptr to track plain magnitudes for blow-up detection).
FitzhughStepResult fitzhugh_euler_step(const Grid& g, double beta, double sigma, double delta,
                                       double rho, double gamma, double dt, const double* u,
                                       const double* v, double* un, double* vn,
                                       const double* ref_u, const double* ref_v);

FitzhughStepResult fitzhugh_euler_step_serial(const Grid& g, double beta, double sigma,
                                              double delta, double rho, double gamma, double dt,
                                              const double* u, const double* v, double* un,
                                              double* vn, const double* ref_u, const double* ref_v);

}  // namespace rdo::kernels
