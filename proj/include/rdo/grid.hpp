#pragma once

#include <stdexcept>

namespace rdo {

/// Uniform cell-centered rectangular mesh on [0,lx] x [0,ly] with Neumann
/// (mirror ghost-cell) boundary semantics. ny == 1 degenerates to a 1-D grid.
struct Grid {
    int nx = 0, ny = 0;
    double lx = 0, ly = 0;
    double hx = 0, hy = 0;

    int cell_count() const { return nx * ny; }
    double cell_volume() const { return hx * hy; }
    double volume() const { return lx * ly; }
    int index(int i, int j) const { return j * nx + i; }
    double x_center(int i) const { return (i + 0.5) * hx; }
    double y_center(int j) const { return (j + 0.5) * hy; }
    bool one_dimensional() const { return ny == 1; }

    bool operator==(const Grid&) const = default;
};

inline Grid build_grid(int nx, int ny, double lx, double ly) {
    if (nx < 2) throw std::invalid_argument("build_grid: nx must be >= 2");
    if (ny < 1) throw std::invalid_argument("build_grid: ny must be >= 1");
    if (!(lx > 0.0) || !(ly > 0.0)) throw std::invalid_argument("build_grid: side lengths must be positive");
    Grid g;
    g.nx = nx;
    g.ny = ny;
    g.lx = lx;
    g.ly = ly;
    g.hx = lx / nx;
    g.hy = ly / ny;
    return g;
}

}  // namespace rdo
