#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rdo/field.hpp"
#include "rdo/grid.hpp"
#include "rdo/kinetics.hpp"
#include "rdo/mask.hpp"

namespace rdo {

struct ConstructionDiagnostics {
    int iterations = 0;
    std::vector<double> update_norms;  // ||w_{k+1} - w_k||_inf per iteration
    double f_res_inf = 0;
    double g_res_inf = 0;
    double eps_measured = 0;           // ||V - Vbar||_inf
    long clamped_evaluations = 0;      // branch evaluations clamped during iteration
};

/// Jump-discontinuous stationary pair: V continuous, U assembled per label
/// from the assigned branches, U(x) = k_{label(x)}(V(x)).
struct StationarySolution {
    VectorField u;
    ScalarField v;
    SubdomainMask mask;
    MaskSpec mask_spec;
    std::vector<int> branch_by_label;  // branch id for label l at [l-1]
    ConstantState base;
    double gamma = 0;
    double tol = 0;
    ConstructionDiagnostics diag;
};

struct ConstructionOptions {
    double gamma = 1.0;
    double tol = 1e-10;
    int max_iter = 200;
    double resonance_tol = 1e-8;
};

/// Banach fixed-point construction with one branch per mask label; the
/// label-1 branch defines the resolvent shift b = h_1'(v_bar) (determinant
/// ratio). Iterates w <- R[(b w - h_label(v_bar + w)) ] from w = 0 until the
/// sup-norm update falls below tol, then assembles U and verifies the
/// residual and branch-domain invariants.
StationarySolution multi_branch_construct(const KineticsModel& model, const Grid& grid,
                                          const SubdomainMask& mask, const ConstantState& base,
                                          const std::vector<BranchFunction>& branch_by_label,
                                          const ConstructionOptions& opts,
                                          const MaskSpec& spec = MaskSpec::full());

/// Two-branch special case (labels 1 and 2); identical iterates to
/// multi_branch_construct by construction.
StationarySolution fixed_point_construct(const KineticsModel& model, const Grid& grid,
                                         const SubdomainMask& mask, const ConstantState& base,
                                         const BranchFunction& branch_1,
                                         const BranchFunction& branch_2,
                                         const ConstructionOptions& opts,
                                         const MaskSpec& spec = MaskSpec::full());

/// BranchPair convenience: resolves the pair's indices to branch functions
/// (validating the pair first) and constructs on labels 1/2.
StationarySolution fixed_point_construct(const KineticsModel& model, const Grid& grid,
                                         const SubdomainMask& mask, const ConstantState& base,
                                         const BranchPair& pair, const ConstructionOptions& opts,
                                         const MaskSpec& spec = MaskSpec::full());

/// (max |f(U,V)|_inf, ||gamma*lap V + g(U,V)||_inf) over cells.
std::pair<double, double> residuals(const KineticsModel& model, const Grid& grid, double gamma,
                                    const VectorField& u, const ScalarField& v);

void save_solution(const std::filesystem::path& dir, const StationarySolution& sol);

/// Reads the two field CSVs and the JSON sidecar back; the mask is rebuilt
/// from the recorded mask spec.
StationarySolution load_solution(const std::filesystem::path& dir);

}  // namespace rdo
