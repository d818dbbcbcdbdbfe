#include "rdo/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "rdo/errors.hpp"
#include "rdo/field_io.hpp"
#include "rdo/kernels.hpp"
#include "rdo/laplacian.hpp"
#include "rdo/resolvent.hpp"
#include "rdo/stability.hpp"

namespace rdo {

namespace {

double clamp_count(double v, double lo, double hi, long& counter) {
    if (v < lo) {
        ++counter;
        return lo;
    }
    if (v > hi) {
        ++counter;
        return hi;
    }
    return v;
}

// max sampled |h'| over the branch interval, used to convert the final update
// norm into a residual bound
double lipschitz_estimate(const KineticsModel& model, const BranchFunction& branch) {
    const int samples = 33;
    double lip = 0;
    const double span = branch.v_hi - branch.v_lo;
    const double h = 1e-6 * std::max(span, 1.0);
    for (int s = 0; s <= samples; ++s) {
        const double v = branch.v_lo + span * s / samples;
        const double vp = std::min(v + h, branch.v_hi);
        const double vm = std::max(v - h, branch.v_lo);
        if (vp <= vm) continue;
        const double hp = model.g(branch.eval(vp), vp);
        const double hm = model.g(branch.eval(vm), vm);
        lip = std::max(lip, std::abs(hp - hm) / (vp - vm));
    }
    return lip;
}

}  // namespace

StationarySolution multi_branch_construct(const KineticsModel& model, const Grid& grid,
                                          const SubdomainMask& mask, const ConstantState& base,
                                          const std::vector<BranchFunction>& branch_by_label,
                                          const ConstructionOptions& opts, const MaskSpec& spec) {
    const int labels = mask.label_count();
    if (static_cast<int>(branch_by_label.size()) < labels)
        throw std::invalid_argument("construct: need one branch per mask label");
    const double v_bar = base.v_bar;
    for (int l = 0; l < labels; ++l)
        if (v_bar < branch_by_label[l].v_lo || v_bar > branch_by_label[l].v_hi)
            throw BranchDomainError("construct: v_bar outside branch " +
                                    std::to_string(branch_by_label[l].id) + " interval");

    // shift from the label-1 branch via the determinant identity
    const Linearization lin = linearization_at(model, base.u_bar, v_bar);
    const double b = det_ratio(lin.A, lin.B, lin.C, lin.d);
    ResolventOperator R(grid, opts.gamma, b, opts.resonance_tol,
                        ResolventOperator::Policy::strict);

    const int nc = grid.cell_count();
    ScalarField w(grid, 0.0), rhs(grid), w_next(grid);
    ConstructionDiagnostics diag;

    auto assemble_rhs = [&](const ScalarField& wk) {
        for (int c = 0; c < nc; ++c) {
            const BranchFunction& br = branch_by_label[mask.label(c) - 1];
            const double v = v_bar + wk[c];
            const double vc = clamp_count(v, br.v_lo, br.v_hi, diag.clamped_evaluations);
            rhs[c] = b * wk[c] - model.g(br.eval(vc), v);
        }
    };

    bool converged = false;
    for (int it = 0; it < opts.max_iter; ++it) {
        assemble_rhs(w);
        w_next = R.solve(rhs);
        const double delta = kernels::max_abs_diff(w_next.data(), w.data(), nc);
        diag.update_norms.push_back(delta);
        std::swap(w, w_next);
        diag.iterations = it + 1;
        if (delta <= opts.tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NonConvergenceError("construct: no convergence within " +
                                      std::to_string(opts.max_iter) + " iterations",
                                  diag.update_norms);

    // final assembly: V must sit strictly inside every used branch interval
    StationarySolution sol{VectorField(grid, model.n), ScalarField(grid), mask, spec,
                           {},                         base,              opts.gamma,
                           opts.tol,                   {}};
    for (int l = 0; l < labels; ++l) sol.branch_by_label.push_back(branch_by_label[l].id);
    long final_clamps = 0;
    for (int c = 0; c < nc; ++c) {
        const BranchFunction& br = branch_by_label[mask.label(c) - 1];
        const double v = v_bar + w[c];
        if (!(v > br.v_lo && v < br.v_hi))
            throw BranchDomainError("construct: final V leaves the validity interval of branch " +
                                    std::to_string(br.id));
        sol.v[c] = v;
        const Eigen::VectorXd u = br.eval(clamp_count(v, br.v_lo, br.v_hi, final_clamps));
        for (int comp = 0; comp < model.n; ++comp) sol.u.at(comp, c) = u(comp);
    }

    auto [f_res, g_res] = residuals(model, grid, opts.gamma, sol.u, sol.v);
    diag.f_res_inf = f_res;
    diag.g_res_inf = g_res;
    diag.eps_measured = kernels::max_abs(w.data(), nc);
    sol.diag = diag;

    // residual invariants
    double u_scale = sup_norm(sol.u), v_scale = sup_norm(sol.v);
    if (f_res > 1e-12 * (1.0 + u_scale + v_scale))
        throw NumericError("construct: branch residual |f(U,V)| too large: " +
                           std::to_string(f_res));
    double lip = 0;
    for (int l = 0; l < labels; ++l)
        lip = std::max(lip, lipschitz_estimate(model, branch_by_label[l]));
    const double delta_last = diag.update_norms.back();
    const double ihh = 1.0 / (grid.hx * grid.hx) + 1.0 / (grid.hy * grid.hy);
    const double g_bound = 4.0 * (std::abs(b) + lip) * std::max(delta_last, 1e-30) +
                           64.0 * opts.gamma * ihh * 1e-16 * std::max(1.0, v_scale);
    if (g_res > g_bound)
        throw NumericError("construct: elliptic residual " + std::to_string(g_res) +
                           " exceeds bound " + std::to_string(g_bound));
    return sol;
}

StationarySolution fixed_point_construct(const KineticsModel& model, const Grid& grid,
                                         const SubdomainMask& mask, const ConstantState& base,
                                         const BranchFunction& branch_1,
                                         const BranchFunction& branch_2,
                                         const ConstructionOptions& opts, const MaskSpec& spec) {
    return multi_branch_construct(model, grid, mask, base, {branch_1, branch_2}, opts, spec);
}

StationarySolution fixed_point_construct(const KineticsModel& model, const Grid& grid,
                                         const SubdomainMask& mask, const ConstantState& base,
                                         const BranchPair& pair, const ConstructionOptions& opts,
                                         const MaskSpec& spec) {
    validate_branch_pair(model, pair);
    return multi_branch_construct(model, grid, mask, base,
                                  {fitzhugh_branch(model, pair.index_1),
                                   fitzhugh_branch(model, pair.index_2)},
                                  opts, spec);
}

std::pair<double, double> residuals(const KineticsModel& model, const Grid& grid, double gamma,
                                    const VectorField& u, const ScalarField& v) {
    const int nc = grid.cell_count();
    ScalarField lap = apply_discrete_laplacian(v);
    double f_res = 0, g_res = 0;
    Eigen::VectorXd uc(model.n);
    for (int c = 0; c < nc; ++c) {
        for (int comp = 0; comp < model.n; ++comp) uc(comp) = u.at(comp, c);
        f_res = std::max(f_res, model.f(uc, v[c]).lpNorm<Eigen::Infinity>());
        g_res = std::max(g_res, std::abs(gamma * lap[c] + model.g(uc, v[c])));
    }
    return {f_res, g_res};
}

void save_solution(const std::filesystem::path& dir, const StationarySolution& sol) {
    std::filesystem::create_directories(dir);
    write_field_csv(dir / "U.csv", sol.u);
    write_field_csv(dir / "V.csv", sol.v);
    nlohmann::json j;
    j["base_state"]["u"] = std::vector<double>(sol.base.u_bar.data(),
                                               sol.base.u_bar.data() + sol.base.u_bar.size());
    j["base_state"]["v"] = sol.base.v_bar;
    j["branch_assignment"] = sol.branch_by_label;
    j["gamma"] = sol.gamma;
    j["tol"] = sol.tol;
    j["iterations"] = sol.diag.iterations;
    j["residuals"]["f_inf"] = sol.diag.f_res_inf;
    j["residuals"]["g_inf"] = sol.diag.g_res_inf;
    j["eps_measured"] = sol.diag.eps_measured;
    j["mask_spec"] = sol.mask_spec.to_string();
    j["seed"] = sol.mask_spec.seed;
    j["update_norms"] = sol.diag.update_norms;
    std::ofstream out(dir / "solution.json");
    out << j.dump(2) << "\n";
}

StationarySolution load_solution(const std::filesystem::path& dir) {
    std::ifstream in(dir / "solution.json");
    if (!in) throw std::runtime_error("load_solution: missing " + (dir / "solution.json").string());
    nlohmann::json j;
    in >> j;
    StationarySolution sol;
    sol.u = read_field_csv(dir / "U.csv");
    sol.v = read_scalar_field_csv(dir / "V.csv");
    const auto ub = j["base_state"]["u"].get<std::vector<double>>();
    sol.base.u_bar = Eigen::Map<const Eigen::VectorXd>(ub.data(), ub.size());
    sol.base.v_bar = j["base_state"]["v"].get<double>();
    sol.branch_by_label = j["branch_assignment"].get<std::vector<int>>();
    sol.gamma = j["gamma"].get<double>();
    sol.tol = j["tol"].get<double>();
    sol.diag.iterations = j["iterations"].get<int>();
    sol.diag.f_res_inf = j["residuals"]["f_inf"].get<double>();
    sol.diag.g_res_inf = j["residuals"]["g_inf"].get<double>();
    sol.diag.eps_measured = j["eps_measured"].get<double>();
    if (j.contains("update_norms"))
        sol.diag.update_norms = j["update_norms"].get<std::vector<double>>();
    sol.mask_spec = MaskSpec::parse(j["mask_spec"].get<std::string>());
    sol.mask = make_mask(sol.v.grid(), sol.mask_spec);
    return sol;
}

}  // namespace rdo
