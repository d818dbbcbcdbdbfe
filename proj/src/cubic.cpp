#include "rdo/cubic.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace rdo {

double cubic_discriminant(double b, double c, double d) {
    // monic x^3 + b x^2 + c x + d
    return 18.0 * b * c * d - 4.0 * b * b * b * d + b * b * c * c - 4.0 * c * c * c -
           27.0 * d * d;
}

std::vector<CubicRoot> real_cubic_roots(double c2, double c1, double c0) {
    Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
    companion(1, 0) = 1.0;
    companion(2, 1) = 1.0;
    companion(0, 2) = -c0;
    companion(1, 2) = -c1;
    companion(2, 2) = -c2;
    Eigen::EigenSolver<Eigen::Matrix3d> es(companion);

    const double scale = 1.0 + std::abs(c2) + std::abs(c1) + std::abs(c0);
    auto p = [&](double u) { return ((u + c2) * u + c1) * u + c0; };
    auto dp = [&](double u) { return (3.0 * u + 2.0 * c2) * u + c1; };

    std::vector<double> roots;
    for (int a = 0; a < 3; ++a) {
        const std::complex<double> lam = es.eigenvalues()(a);
        // tolerate the O(sqrt(eps)) imaginary dust a collapsing pair carries at folds
        if (std::abs(lam.imag()) > 1e-7 * (1.0 + std::abs(lam))) continue;
        double u = lam.real();
        // one polish step, guarded against the vanishing derivative at folds
        const double d1 = dp(u);
        if (std::abs(d1) > 1e-4 * scale) u -= p(u) / d1;
        roots.push_back(u);
    }
    std::sort(roots.begin(), roots.end());

    std::vector<CubicRoot> out;
    for (size_t a = 0; a < roots.size(); ++a) {
        const double merge_tol = 1e-7 * (1.0 + std::abs(roots[a]));
        if (!out.empty() && roots[a] - out.back().value <= merge_tol) {
            out.back().degenerate = true;
            out.back().value = 0.5 * (out.back().value + roots[a]);
        } else {
            out.push_back({roots[a], false});
        }
    }
    // a complex pair collapsing onto the real axis is also a fold
    if (out.size() == 2 && roots.size() == 2)
        for (auto& r : out)
            if (std::abs(dp(r.value)) < 1e-6 * scale) r.degenerate = true;
    return out;
}

}  // namespace rdo
