#pragma once

#include <vector>

#include "rdo/grid.hpp"

namespace rdo {

/// One Neumann eigenpair of -Laplacian on the rectangle: mu = (k*pi/lx)^2 + (m*pi/ly)^2
/// with cosine-product eigenfunction indexed by (k, m).
struct NeumannMode {
    double mu;
    int k, m;
};

/// First `count` continuum Neumann eigenvalues, ascending, ties broken by
/// (k, m) lexicographic. The leading entry is always (0, (0,0)).
std::vector<NeumannMode> neumann_eigenvalues(const Grid& g, int count);

/// Eigenvalues of the 1-D discrete second-difference operator with mirror
/// ghosts: lambda_k = (2 - 2 cos(pi k / n)) / h^2, k = 0..n-1.
std::vector<double> discrete_axis_eigenvalues(int n, double h);

/// All nx*ny eigenvalues mu^h_{k,m} of the discrete Neumann -Laplacian, laid
/// out like a field in cosine-mode index space (index = m*nx + k).
std::vector<double> discrete_laplacian_eigenvalues(const Grid& g);

}  // namespace rdo
