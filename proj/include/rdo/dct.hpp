#pragma once

#include <vector>

#include "rdo/field.hpp"
#include "rdo/grid.hpp"

namespace rdo {

/// Separable 2-D cosine transform on cell centers. The basis
/// phi_k(i) = cos(pi k (i+1/2)/n) diagonalizes the mirror-ghost Neumann
/// Laplacian exactly, so forward/inverse here are the spectral transform pair
/// used by the resolvent solver.
///
/// forward: c[k] = sum_i f[i] phi_k(i)   (per axis, x then y)
/// inverse: f[i] = (c[0] + 2 sum_{k>=1} c[k] phi_k(i)) / n
class CosineTransform2D {
public:
    explicit CosineTransform2D(const Grid& g);

    const Grid& grid() const { return grid_; }

    void forward(const double* f, double* coef) const;
    void inverse(const double* coef, double* f) const;

    // plain reference versions, kept for tests/benchmarks
    void forward_serial(const double* f, double* coef) const;
    void inverse_serial(const double* coef, double* f) const;

private:
    Grid grid_;
    std::vector<double> bx_, by_;    // basis[k*n + i] = cos(pi k (i+1/2)/n)
    mutable std::vector<double> tmp_;
};

}  // namespace rdo
