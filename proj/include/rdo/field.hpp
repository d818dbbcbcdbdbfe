#pragma once

#include <span>
#include <vector>

#include "rdo/grid.hpp"

namespace rdo {

/// One real value per cell, row-major (index = j*nx + i).
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0)
        : grid_(g), values_(static_cast<size_t>(g.cell_count()), fill) {}

    const Grid& grid() const { return grid_; }
    int size() const { return static_cast<int>(values_.size()); }
    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }
    double& operator[](int c) { return values_[c]; }
    double operator[](int c) const { return values_[c]; }
    double& at(int i, int j) { return values_[grid_.index(i, j)]; }
    double at(int i, int j) const { return values_[grid_.index(i, j)]; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

private:
    Grid grid_;
    std::vector<double> values_;
};

/// n real components per cell, stored component-major: component c occupies
/// cells [c*nx*ny, (c+1)*nx*ny).
class VectorField {
public:
    VectorField() = default;
    VectorField(const Grid& g, int ncomp, double fill = 0.0)
        : grid_(g), n_(ncomp), values_(static_cast<size_t>(g.cell_count()) * ncomp, fill) {}

    const Grid& grid() const { return grid_; }
    int components() const { return n_; }
    int cells() const { return grid_.cell_count(); }
    double* component(int c) { return values_.data() + static_cast<size_t>(c) * cells(); }
    const double* component(int c) const {
        return values_.data() + static_cast<size_t>(c) * cells();
    }
    double& at(int c, int cell) { return values_[static_cast<size_t>(c) * cells() + cell]; }
    double at(int c, int cell) const { return values_[static_cast<size_t>(c) * cells() + cell]; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

private:
    Grid grid_;
    int n_ = 0;
    std::vector<double> values_;
};

double sup_norm(const ScalarField& f);
double sup_norm(const VectorField& f);
double sup_norm_diff(const ScalarField& a, const ScalarField& b);
double sup_norm_diff(const VectorField& a, const VectorField& b);

/// Cell-volume-weighted L^p norm: (sum |f|^p hx*hy)^(1/p).
double lp_norm(const ScalarField& f, double p);

double mean(const ScalarField& f);

/// <a, b> with cell-volume weight.
double inner(const ScalarField& a, const ScalarField& b);

void axpy(double alpha, const ScalarField& x, ScalarField& y);  // y += alpha*x
bool all_finite(const ScalarField& f);
bool all_finite(const VectorField& f);

}  // namespace rdo
