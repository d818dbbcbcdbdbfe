#include "rdo/dct.hpp"

#include <cmath>
#include <numbers>

namespace rdo {

namespace {

std::vector<double> cosine_basis(int n) {
    std::vector<double> b(static_cast<size_t>(n) * n);
    const double pi = std::numbers::pi;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) b[k * n + i] = std::cos(pi * k * (i + 0.5) / n);
    return b;
}

}  // namespace

CosineTransform2D::CosineTransform2D(const Grid& g)
    : grid_(g), bx_(cosine_basis(g.nx)), by_(cosine_basis(g.ny)) {}

void CosineTransform2D::forward(const double* f, double* coef) const {
    const int nx = grid_.nx, ny = grid_.ny;
    std::vector<double> tmp(static_cast<size_t>(nx) * ny);
    const double* bx = bx_.data();
    const double* by = by_.data();
#pragma omp parallel for schedule(static) if (grid_.cell_count() >= 1 << 16)
    for (int j = 0; j < ny; ++j) {
        const double* row = f + j * nx;
        double* out = tmp.data() + j * nx;
        for (int k = 0; k < nx; ++k) {
            const double* bk = bx + k * nx;
            double s = 0;
            for (int i = 0; i < nx; ++i) s += bk[i] * row[i];
            out[k] = s;
        }
    }
#pragma omp parallel for schedule(static) if (grid_.cell_count() >= 1 << 16)
    for (int m = 0; m < ny; ++m) {
        double* out = coef + m * nx;
        for (int k = 0; k < nx; ++k) out[k] = 0.0;
        const double* bm = by + m * ny;
        for (int j = 0; j < ny; ++j) {
            const double w = bm[j];
            const double* row = tmp.data() + j * nx;
            for (int k = 0; k < nx; ++k) out[k] += w * row[k];
        }
    }
}

void CosineTransform2D::inverse(const double* coef, double* f) const {
    const int nx = grid_.nx, ny = grid_.ny;
    std::vector<double> tmp(static_cast<size_t>(nx) * ny);
    const double* bx = bx_.data();
    const double* by = by_.data();
    const double sy = 1.0 / ny, sx = 1.0 / nx;
#pragma omp parallel for schedule(static) if (grid_.cell_count() >= 1 << 16)
    for (int j = 0; j < ny; ++j) {
        double* out = tmp.data() + j * nx;
        const double* c0 = coef;
        for (int k = 0; k < nx; ++k) out[k] = c0[k] * sy;
        for (int m = 1; m < ny; ++m) {
            const double w = 2.0 * by[m * ny + j] * sy;
            const double* row = coef + m * nx;
            for (int k = 0; k < nx; ++k) out[k] += w * row[k];
        }
    }
#pragma omp parallel for schedule(static) if (grid_.cell_count() >= 1 << 16)
    for (int j = 0; j < ny; ++j) {
        const double* t = tmp.data() + j * nx;
        double* out = f + j * nx;
        for (int i = 0; i < nx; ++i) out[i] = t[0] * sx;
        for (int k = 1; k < nx; ++k) {
            const double w = 2.0 * t[k] * sx;
            const double* bk = bx + k * nx;
            for (int i = 0; i < nx; ++i) out[i] += w * bk[i];
        }
    }
}

void CosineTransform2D::forward_serial(const double* f, double* coef) const {
    const int nx = grid_.nx, ny = grid_.ny;
    const double pi = std::numbers::pi;
    for (int m = 0; m < ny; ++m)
        for (int k = 0; k < nx; ++k) {
            double s = 0;
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i)
                    s += f[j * nx + i] * std::cos(pi * k * (i + 0.5) / nx) *
                         std::cos(pi * m * (j + 0.5) / ny);
            coef[m * nx + k] = s;
        }
}

void CosineTransform2D::inverse_serial(const double* coef, double* f) const {
    const int nx = grid_.nx, ny = grid_.ny;
    const double pi = std::numbers::pi;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            double s = 0;
            for (int m = 0; m < ny; ++m)
                for (int k = 0; k < nx; ++k) {
                    const double w = (k == 0 ? 1.0 : 2.0) * (m == 0 ? 1.0 : 2.0);
                    s += w * coef[m * nx + k] * std::cos(pi * k * (i + 0.5) / nx) *
                         std::cos(pi * m * (j + 0.5) / ny);
                }
            f[j * nx + i] = s / (nx * ny);
        }
}

}  // namespace rdo
