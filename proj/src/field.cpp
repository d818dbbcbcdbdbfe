#include "rdo/field.hpp"

#include <algorithm>
#include <cmath>

#include "rdo/kernels.hpp"

namespace rdo {

double sup_norm(const ScalarField& f) { return kernels::max_abs(f.data(), f.size()); }

double sup_norm(const VectorField& f) {
    return kernels::max_abs(f.values().data(), static_cast<int>(f.values().size()));
}

double sup_norm_diff(const ScalarField& a, const ScalarField& b) {
    return kernels::max_abs_diff(a.data(), b.data(), a.size());
}

double sup_norm_diff(const VectorField& a, const VectorField& b) {
    return kernels::max_abs_diff(a.values().data(), b.values().data(),
                                 static_cast<int>(a.values().size()));
}

double lp_norm(const ScalarField& f, double p) {
    const double s = kernels::sum_abs_pow(f.data(), f.size(), p);
    return std::pow(s * f.grid().cell_volume(), 1.0 / p);
}

double mean(const ScalarField& f) { return kernels::sum(f.data(), f.size()) / f.size(); }

double inner(const ScalarField& a, const ScalarField& b) {
    const int n = a.size();
    const int nblocks = (n + kernels::sum_block - 1) / kernels::sum_block;
    std::vector<double> partial(nblocks);
    for (int blk = 0; blk < nblocks; ++blk) {
        const int lo = blk * kernels::sum_block;
        const int hi = std::min(n, lo + kernels::sum_block);
        double s = 0;
        for (int i = lo; i < hi; ++i) s += a[i] * b[i];
        partial[blk] = s;
    }
    double s = 0;
    for (double x : partial) s += x;
    return s * a.grid().cell_volume();
}

void axpy(double alpha, const ScalarField& x, ScalarField& y) {
    for (int i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

bool all_finite(const ScalarField& f) {
    for (double x : f.values())
        if (!std::isfinite(x)) return false;
    return true;
}

bool all_finite(const VectorField& f) {
    for (double x : f.values())
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace rdo
