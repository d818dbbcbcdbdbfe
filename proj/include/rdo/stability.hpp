#pragma once

#include <Eigen/Core>

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rdo/field.hpp"
#include "rdo/grid.hpp"
#include "rdo/kinetics.hpp"
#include "rdo/spectra.hpp"

namespace rdo {

struct StationarySolution;

/// Spectral bound s(M) = max Re of the eigenvalues (dense eigensolve; for
/// n <= 2 cross-checked against the trace/determinant closed form).
double spectral_bound(const Eigen::MatrixXd& M);

/// det[[A0,B0],[C0,d0]] / det A0; asserted against d0 - C0 A0^{-1} B0 to
/// 1e-12 relative. Throws NumericError when A0 is numerically singular.
double det_ratio(const Eigen::MatrixXd& A0, const Eigen::VectorXd& B0,
                 const Eigen::RowVectorXd& C0, double d0);

struct ResonanceMarginReport {
    double ratio = 0;      // det-ratio value that must avoid gamma*mu_k
    double margin = 0;     // min_k |ratio - gamma*mu_k|
    double tolerance = 0;  // pass threshold actually used
    bool pass = false;
    NeumannMode nearest{0, 0, 0};
};

/// Constant-state resonance condition: det A0 != 0 and the determinant ratio
/// avoids every gamma*mu_k. The mode list must cover mu <= ratio/gamma padded
/// by a safety window (helper below guarantees that).
ResonanceMarginReport check_base_state_resonance(const Eigen::MatrixXd& A0, const Eigen::VectorXd& B0,
                                           const Eigen::RowVectorXd& C0, double d0, double gamma,
                                           const std::vector<NeumannMode>& modes);

/// Enough continuum modes to decide the resonance condition for this ratio.
std::vector<NeumannMode> modes_covering_ratio(const Grid& g, double ratio, double gamma);

struct SignCondition {
    double value = 0;
    bool pass = false;  // value < 0
};

struct StabilityConditions {
    SignCondition s_A0;          // s(f_u at base) < 0
    SignCondition s_block;       // s of the (n+1)x(n+1) constant block < 0
    std::vector<std::pair<int, SignCondition>> s_fu_branch;  // per branch id
    std::vector<std::pair<int, SignCondition>> g_v_branch;   // per branch id

    bool linear_pass() const;     // all of s_A0, s_block, s_fu_branch
    bool nonlinear_pass() const;  // linear + every g_v < 0
    bool any_branch_unstable() const;
};

StabilityConditions check_stability_conditions(const KineticsModel& model,
                                               const ConstantState& base,
                                               const std::vector<BranchFunction>& branches,
                                               double gamma);

/// Per-cell linearization A(x), B(x), C(x), d(x) at a stationary solution,
/// plus the constant matrices at the base state.
struct LinearizationData {
    Grid grid;
    int n = 0;
    std::vector<double> A;  // n*n entries per cell, row-major per cell
    std::vector<double> B;  // n per cell
    std::vector<double> C;  // n per cell
    std::vector<double> d;  // 1 per cell
    Eigen::MatrixXd A0;
    Eigen::VectorXd B0;
    Eigen::RowVectorXd C0;
    double d0 = 0;

    Eigen::MatrixXd A_at(int cell) const;
    Eigen::VectorXd B_at(int cell) const;
    Eigen::RowVectorXd C_at(int cell) const;
};

LinearizationData linearize_on_solution(const KineticsModel& model,
                                        const StationarySolution& sol);

struct DeviationNorms {
    double dA = 0, dB = 0, dC = 0, dd = 0;
    int exponent = 0;
    double total() const { return dA + dB + dC + dd; }
};

/// Cell-volume-weighted L^N norms of |A(x)-A0| (Frobenius per cell) etc.
DeviationNorms deviation_norms(const LinearizationData& lin, int N_exponent);

struct HScanOptions {
    double kappa = 0.01;
    int alpha_samples = 64;
    int beta_samples = 64;
    double alpha_max = 0;  // 0: auto = ||coefficients||_inf + 1
    double beta_max = 0;   // 0: auto = ||coefficients||_inf + 1
};

struct HScanResult {
    bool applicable = false;   // requires n = 1 and ess sup a < 0
    double sup = 0;            // sup over the scan box plus the beta tail bound
    double grid_sup = 0;       // sup over the sampled box only
    double tail_bound = 0;     // sup_x d(x) + kappa (limit beta -> inf at alpha = -kappa)
    double ess_sup_a = 0;
    double ess_sup_d = 0;
    double kappa = 0, alpha_max = 0, beta_max = 0;
    std::string reason;        // why not applicable, when applicable == false
};

/// Scalar (n = 1) certification scan of h(x, lambda) = Re(-cb/(a-lambda) + d - lambda)
/// over lambda = alpha + i*beta, alpha in [-kappa, alpha_max], beta in [0, beta_max],
/// and over all cells. Monotonicity in beta^2 bounds the tail by
/// max(h at beta_max, d(x) - alpha). sup < 0 certifies s(L_p) < 0 for every gamma.
HScanResult scan_h_function(std::span<const double> a, std::span<const double> b,
                            std::span<const double> c, std::span<const double> d,
                            const HScanOptions& opts = {});

HScanResult scan_h_function(const LinearizationData& lin, const HScanOptions& opts = {});

struct SpectrumResult {
    std::vector<std::complex<double>> rightmost;  // sorted by decreasing real part
    double max_re = 0;
    std::string method;  // "dense" or "subspace"
    /// |component| of the eigenvector of the rightmost eigenvalue, stacked as
    /// [phi_0.. phi_{n-1}, psi]; filled on request (dense path).
    std::vector<double> rightmost_vector;
};

struct SpectrumOptions {
    int n_report = 10;
    int dense_cap = 5000;         // dense eigensolve up to this many unknowns
    bool allow_iterative = true;  // beyond the cap: propagator subspace iteration
    int subspace_dim = 16;
    int max_outer = 300;
    double tol = 1e-8;
    bool want_rightmost_vector = false;
};

/// Eigenvalues of the discretized linearized operator
///   L (phi, psi) = (A phi + B psi, gamma*lap psi + C phi + d psi).
SpectrumResult discrete_linearized_spectrum(const LinearizationData& lin, double gamma,
                                            const SpectrumOptions& opts = {});

struct StabilityReport {
    ResonanceMarginReport resonance_condition;
    StabilityConditions conditions;
    DeviationNorms deviations;
    HScanResult h_scan;
    std::optional<SpectrumResult> spectrum;
    double gamma = 0;
    std::string classification;  // stable-certified-conditions | unstable-by-ODE-spectrum | inconclusive

    std::string to_json() const;
    std::string to_table() const;
};

struct StabilityOptions {
    HScanOptions h_scan;
    SpectrumOptions spectrum;
    bool run_spectrum = true;
    int deviation_exponent = 0;  // 0: spatial dimension of the grid
    /// Optional large-gamma route: user asserts gamma is large enough and
    /// supplies a deviation-norm threshold (large-gamma deviation-norm route).
    std::optional<double> deviation_threshold;
};

/// Runs every check against a constructed solution and classifies it.
StabilityReport analyze_stability(const KineticsModel& model, const StationarySolution& sol,
                                  const std::vector<BranchFunction>& branches,
                                  const StabilityOptions& opts = {});

}  // namespace rdo
