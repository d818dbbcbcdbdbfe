#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rdo {

struct FitzhughParams {
    double beta, sigma, delta, rho;
};

struct BranchPoint {
    Eigen::VectorXd u;
    bool degenerate = false;
};

/// The reaction system: n ODE components u coupled to the scalar v.
/// All callables are pure and reentrant.
struct KineticsModel {
    int n = 0;
    std::string name;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)> f;
    std::function<double(const Eigen::VectorXd&, double)> g;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&, double)> f_u;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)> f_v;
    std::function<Eigen::RowVectorXd(const Eigen::VectorXd&, double)> g_u;
    std::function<double(const Eigen::VectorXd&, double)> g_v;
    /// All u-roots of f(., v) = 0, ascending by first component; may be empty.
    std::function<std::vector<BranchPoint>(double)> branch_solver;
    /// Set for the FitzHugh instance; enables the fused time-step kernel and
    /// closed-form branch handling.
    std::optional<FitzhughParams> fitzhugh;
};

struct ConstantState {
    Eigen::VectorXd u_bar;
    double v_bar = 0;
};

/// Two branch indices sharing a validity interval (Assumption on two branches).
struct BranchPair {
    int index_1 = 1, index_2 = 2;
    double v_lo = 0, v_hi = 0;
};

/// A solution branch u = k(v) of f(u, v) = 0 on [v_lo, v_hi].
struct BranchFunction {
    int id = 0;
    double v_lo = 0, v_hi = 0;
    std::function<Eigen::VectorXd(double)> eval;  // requires v in [v_lo, v_hi]
};

/// u_t = u(1-u)(u-beta) - v, v_t = gamma lap(v) + sigma u - delta v - rho.
/// Requires sigma, delta > 0, rho >= 0 and 0 < beta < 1.
KineticsModel fitzhugh_model(double beta, double sigma, double delta, double rho);

/// All u-roots of f(u, v) = 0 at fixed v, ascending (n = 1 closed-form path).
std::vector<BranchPoint> branches_at(const KineticsModel& model, double v);

/// General-n root search: damped Newton from each seed; converged roots are
/// deduplicated and sorted by first component. Seeds that fail to converge
/// are reported through failed_seeds (when given), never as an exception.
std::vector<BranchPoint> branches_at(const KineticsModel& model, double v,
                                     const std::vector<Eigen::VectorXd>& seeds,
                                     std::vector<int>* failed_seeds = nullptr);

/// Branch function for a general-n model: continuation in v by damped Newton,
/// walking from the anchor value in bounded steps. Pure and deterministic.
BranchFunction make_newton_branch(const KineticsModel& model, int id,
                                  const Eigen::VectorXd& u_at_anchor, double v_anchor,
                                  double v_lo, double v_hi);

/// Checks the analytic Jacobians against centered finite differences at
/// random points (relative 1e-5, step 1e-6*(1+|arg|)). Throws NumericError
/// with the offending entry on failure.
void validate_model(const KineticsModel& model, int samples = 100,
                    std::uint64_t seed = 12345, double u_range = 2.0, double v_range = 2.0);

struct SearchBox {
    double u_lo, u_hi;
    double v_lo, v_hi;
};

/// Constant solutions of f = 0, g = 0 inside the box, found by substituting
/// the g-nullcline and scanning for sign changes (n = 1), refined by Newton,
/// deduplicated within 1e-8; sorted ascending by u.
std::vector<ConstantState> constant_steady_states(const KineticsModel& model,
                                                  const SearchBox& box, int resolution);

struct Linearization {
    Eigen::MatrixXd A;
    Eigen::VectorXd B;
    Eigen::RowVectorXd C;
    double d;
};

Linearization linearization_at(const KineticsModel& model, const Eigen::VectorXd& u, double v);

/// Fold structure of the FitzHugh cubic: branch ids follow the nullcline
/// picture with 1 = left decreasing piece, 2 = right decreasing piece,
/// 3 = middle increasing piece; all three exist exactly on (v_lo, v_hi).
struct FitzhughBranchInfo {
    double u_minus, u_plus;  // critical points of u(1-u)(u-beta)
    double v_lo, v_hi;       // fold values: common validity interval
};

FitzhughBranchInfo fitzhugh_branch_info(const FitzhughParams& p);

/// Branch function for id in {1,2,3}; interval_margin shrinks the closed
/// evaluation interval away from the folds (where the root pair collapses).
BranchFunction fitzhugh_branch(const KineticsModel& model, int id,
                               double interval_margin = 1e-9);

/// Two-branch descriptor with the common validity interval; validated so both
/// branches exist and stay distinct on sampled points of the interval.
BranchPair make_branch_pair(const KineticsModel& model, int index_1, int index_2);
void validate_branch_pair(const KineticsModel& model, const BranchPair& pair, int samples = 64);

/// |f(u,v)|_inf <= 1e-12 * (1 + |u| + |v|) residual check used by invariants.
bool branch_residual_ok(const KineticsModel& model, const Eigen::VectorXd& u, double v);

}  // namespace rdo
