#include "rdo/laplacian.hpp"

#include <stdexcept>

#include "rdo/kernels.hpp"

namespace rdo {

void apply_discrete_laplacian(const ScalarField& v, ScalarField& out) {
    if (!(v.grid() == out.grid())) throw std::invalid_argument("laplacian: grid mismatch");
    kernels::laplacian(v.grid(), v.data(), out.data());
}

ScalarField apply_discrete_laplacian(const ScalarField& v) {
    ScalarField out(v.grid());
    kernels::laplacian(v.grid(), v.data(), out.data());
    return out;
}

}  // namespace rdo
