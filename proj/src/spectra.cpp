#include "rdo/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rdo {

std::vector<NeumannMode> neumann_eigenvalues(const Grid& g, int count) {
    if (count < 1) throw std::invalid_argument("neumann_eigenvalues: count must be >= 1");
    const double pi = std::numbers::pi;
    const double ax = pi / g.lx, ay = pi / g.ly;
    // Grow a candidate box until the count-th smallest value is certainly
    // covered: every mode with mu <= mu_cut has k <= sqrt(mu_cut)/ax etc.
    int box = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count)))) + 2;
    const int my = g.one_dimensional() ? 0 : 1;  // 1-D grids carry x-modes only
    for (;;) {
        std::vector<NeumannMode> modes;
        modes.reserve(static_cast<size_t>(box + 1) * (my ? box + 1 : 1));
        for (int k = 0; k <= box; ++k)
            for (int m = 0; m <= (my ? box : 0); ++m)
                modes.push_back({ax * ax * k * k + ay * ay * m * m, k, m});
        std::sort(modes.begin(), modes.end(), [](const NeumannMode& a, const NeumannMode& b) {
            if (a.mu != b.mu) return a.mu < b.mu;
            if (a.k != b.k) return a.k < b.k;
            return a.m < b.m;
        });
        if (static_cast<int>(modes.size()) >= count) {
            const double mu_cut = modes[count - 1].mu;
            const bool covered = ax * ax * box * box > mu_cut &&
                                 (!my || ay * ay * box * box > mu_cut);
            if (covered) {
                modes.resize(count);
                return modes;
            }
        }
        box *= 2;
    }
}

std::vector<double> discrete_axis_eigenvalues(int n, double h) {
    std::vector<double> lam(n);
    const double pi = std::numbers::pi;
    for (int k = 0; k < n; ++k) lam[k] = (2.0 - 2.0 * std::cos(pi * k / n)) / (h * h);
    return lam;
}

std::vector<double> discrete_laplacian_eigenvalues(const Grid& g) {
    const auto lx = discrete_axis_eigenvalues(g.nx, g.hx);
    const auto ly = g.one_dimensional() ? std::vector<double>{0.0}
                                        : discrete_axis_eigenvalues(g.ny, g.hy);
    std::vector<double> mu(static_cast<size_t>(g.nx) * g.ny);
    for (int m = 0; m < g.ny; ++m)
        for (int k = 0; k < g.nx; ++k) mu[m * g.nx + k] = lx[k] + ly[m];
    return mu;
}

}  // namespace rdo
