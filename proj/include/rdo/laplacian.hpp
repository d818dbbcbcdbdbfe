#pragma once

#include "rdo/field.hpp"

namespace rdo {

/// 5-point Neumann Laplacian with mirror ghost cells (3-point when ny == 1).
/// Symmetric, annihilates constants, rows and columns sum to zero.
void apply_discrete_laplacian(const ScalarField& v, ScalarField& out);
ScalarField apply_discrete_laplacian(const ScalarField& v);

}  // namespace rdo
