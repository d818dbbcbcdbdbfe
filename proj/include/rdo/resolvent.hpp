#pragma once

#include <memory>
#include <vector>

#include "rdo/dct.hpp"
#include "rdo/field.hpp"
#include "rdo/grid.hpp"

namespace rdo {

/// Spectral solver for (gamma*lap + b) v = f in the discrete cosine basis:
/// divide mode-wise by (b - gamma*mu^h_{k,m}).
///
/// Resonance policy:
///  - strict: construction refuses any shift within resonance_tol of a scaled
///    discrete eigenvalue (the fixed-point scheme feeds it generic forcing).
///  - allow_compatible: resonant modes are tolerated as long as the forcing
///    coefficient on them is negligible (<= 1e-12 * ||f||); those modes are
///    projected out. This is the discrete solvability condition and makes
///    e.g. the pure Neumann Poisson problem (b = 0, mean-free f) well-posed.
class ResolventOperator {
public:
    enum class Policy { strict, allow_compatible };

    ResolventOperator(const Grid& g, double gamma, double b, double resonance_tol = 1e-8,
                      Policy policy = Policy::strict);

    ScalarField solve(const ScalarField& f) const;

    double gamma() const { return gamma_; }
    double shift() const { return b_; }
    /// min_k |b - gamma*mu^h_k|
    double gap() const { return gap_; }

private:
    Grid grid_;
    double gamma_, b_, resonance_tol_, gap_;
    Policy policy_;
    CosineTransform2D transform_;
    std::vector<double> denom_;          // b - gamma*mu^h per mode
    std::vector<int> resonant_modes_;    // mode indices with |denom| below tolerance
};

/// One-shot solve with the compatible-forcing policy.
ScalarField resolvent_solve(const Grid& g, double gamma, double b, const ScalarField& f);

}  // namespace rdo
