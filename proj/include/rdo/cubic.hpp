#pragma once

#include <vector>

namespace rdo {

struct CubicRoot {
    double value;
    bool degenerate;  // merged double root (fold)
};

/// Real roots of the monic cubic u^3 + c2 u^2 + c1 u + c0, ascending,
/// multiplicity collapsed. Roots come from companion-matrix eigenvalues with a
/// guarded Newton polish; Cardano is avoided (cancellation near triple roots).
std::vector<CubicRoot> real_cubic_roots(double c2, double c1, double c0);

/// Discriminant of the monic cubic (positive: three distinct real roots).
double cubic_discriminant(double c2, double c1, double c0);

}  // namespace rdo
