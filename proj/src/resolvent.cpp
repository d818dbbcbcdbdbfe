#include "rdo/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rdo/errors.hpp"
#include "rdo/kernels.hpp"
#include "rdo/spectra.hpp"

namespace rdo {

ResolventOperator::ResolventOperator(const Grid& g, double gamma, double b, double resonance_tol,
                                     Policy policy)
    : grid_(g), gamma_(gamma), b_(b), resonance_tol_(resonance_tol), policy_(policy),
      transform_(g) {
    if (!(gamma > 0)) throw std::invalid_argument("resolvent: gamma must be positive");
    const auto mu = discrete_laplacian_eigenvalues(g);
    denom_.resize(mu.size());
    gap_ = std::numeric_limits<double>::infinity();
    const double tol = resonance_tol_ * std::max(1.0, std::abs(b_));
    int worst = -1;
    for (size_t idx = 0; idx < mu.size(); ++idx) {
        denom_[idx] = b_ - gamma_ * mu[idx];
        const double dist = std::abs(denom_[idx]);
        if (dist < gap_) {
            gap_ = dist;
            worst = static_cast<int>(idx);
        }
        if (dist <= tol) resonant_modes_.push_back(static_cast<int>(idx));
    }
    if (policy_ == Policy::strict && !resonant_modes_.empty())
        throw ResonanceError(b_, gamma_, mu[worst], worst % g.nx, worst / g.nx, gap_);
}

ScalarField ResolventOperator::solve(const ScalarField& f) const {
    if (!(f.grid() == grid_)) throw std::invalid_argument("resolvent: grid mismatch");
    ScalarField coef(grid_), out(grid_);
    transform_.forward(f.data(), coef.data());
    if (!resonant_modes_.empty()) {
        // solvability: forcing must be (numerically) orthogonal to the resonant modes
        const double scale = kernels::max_abs(coef.data(), coef.size());
        for (int idx : resonant_modes_) {
            if (std::abs(coef[idx]) > 1e-12 * std::max(1.0, scale))
                throw ResonanceError(b_, gamma_, (b_ - denom_[idx]) / gamma_, idx % grid_.nx,
                                     idx / grid_.nx, std::abs(denom_[idx]));
            coef[idx] = 0.0;
        }
        for (int c = 0; c < coef.size(); ++c)
            coef[c] = denom_[c] != 0.0 ? coef[c] / denom_[c] : 0.0;
    } else {
        for (int c = 0; c < coef.size(); ++c) coef[c] /= denom_[c];
    }
    transform_.inverse(coef.data(), out.data());
    return out;
}

ScalarField resolvent_solve(const Grid& g, double gamma, double b, const ScalarField& f) {
    ResolventOperator op(g, gamma, b, 1e-8, ResolventOperator::Policy::allow_compatible);
    return op.solve(f);
}

}  // namespace rdo
