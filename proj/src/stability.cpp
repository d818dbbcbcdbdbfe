#include "rdo/stability.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "rdo/errors.hpp"
#include "rdo/kernels.hpp"
#include "rdo/stationary.hpp"

namespace rdo {

double spectral_bound(const Eigen::MatrixXd& M) {
    if (M.rows() != M.cols()) throw std::invalid_argument("spectral_bound: matrix must be square");
    if (!M.allFinite()) throw NumericError("spectral_bound: non-finite matrix entries");
    const int n = static_cast<int>(M.rows());
    if (n == 1) return M(0, 0);

    Eigen::EigenSolver<Eigen::MatrixXd> es(M, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) {
        std::ostringstream os;
        os << "spectral_bound: eigensolver failed on\n" << M;
        throw NumericError(os.str());
    }
    const double s = es.eigenvalues().real().maxCoeff();

    if (n == 2) {
        // closed form via trace/determinant
        const double tr = M.trace(), det = M.determinant();
        const double disc = tr * tr - 4.0 * det;
        const double closed =
            disc >= 0.0 ? 0.5 * (tr + std::sqrt(disc)) : 0.5 * tr;
        const double scale = 1.0 + M.cwiseAbs().maxCoeff();
        if (std::abs(s - closed) > 1e-9 * scale) {
            std::ostringstream os;
            os << "spectral_bound: eigensolver disagrees with the 2x2 closed form on\n" << M;
            throw NumericError(os.str());
        }
    }
    return s;
}

double det_ratio(const Eigen::MatrixXd& A0, const Eigen::VectorXd& B0,
                 const Eigen::RowVectorXd& C0, double d0) {
    const int n = static_cast<int>(A0.rows());
    const double detA = A0.determinant();
    const double scale = std::max(1.0, std::pow(A0.norm(), n));
    if (std::abs(detA) < 1e-12 * scale)
        throw NumericError("det_ratio: det A0 is numerically singular");

    Eigen::MatrixXd block(n + 1, n + 1);
    block.topLeftCorner(n, n) = A0;
    block.topRightCorner(n, 1) = B0;
    block.bottomLeftCorner(1, n) = C0;
    block(n, n) = d0;
    const double ratio = block.determinant() / detA;

    const double schur = d0 - (C0 * A0.partialPivLu().solve(B0))(0);
    if (std::abs(ratio - schur) > 1e-12 * std::max(1.0, std::abs(ratio)))
        throw NumericError("det_ratio: determinant identity violated (" + std::to_string(ratio) +
                           " vs " + std::to_string(schur) + ")");
    return ratio;
}

std::vector<NeumannMode> modes_covering_ratio(const Grid& g, double ratio, double gamma) {
    // only mu <= ratio/gamma can resonate; pad by a 50% window plus a few modes
    if (ratio <= 0) return neumann_eigenvalues(g, 1);
    const double mu_cut = 1.5 * ratio / gamma + 1.0;
    int count = 8;
    for (;;) {
        auto modes = neumann_eigenvalues(g, count);
        if (modes.back().mu > mu_cut) return modes;
        count *= 2;
    }
}

ResonanceMarginReport check_base_state_resonance(const Eigen::MatrixXd& A0, const Eigen::VectorXd& B0,
                                           const Eigen::RowVectorXd& C0, double d0, double gamma,
                                           const std::vector<NeumannMode>& modes) {
    ResonanceMarginReport r;
    r.ratio = det_ratio(A0, B0, C0, d0);
    r.margin = std::numeric_limits<double>::infinity();
    for (const auto& mode : modes) {
        const double dist = std::abs(r.ratio - gamma * mode.mu);
        if (dist < r.margin) {
            r.margin = dist;
            r.nearest = mode;
        }
    }
    r.tolerance = 1e-8 * std::max(1.0, std::abs(r.ratio));
    r.pass = r.margin > r.tolerance;
    return r;
}

bool StabilityConditions::linear_pass() const {
    if (!s_A0.pass || !s_block.pass) return false;
    for (const auto& [id, c] : s_fu_branch)
        if (!c.pass) return false;
    return true;
}

bool StabilityConditions::nonlinear_pass() const {
    if (!linear_pass()) return false;
    for (const auto& [id, c] : g_v_branch)
        if (!c.pass) return false;
    return true;
}

bool StabilityConditions::any_branch_unstable() const {
    for (const auto& [id, c] : s_fu_branch)
        if (c.value > 0) return true;
    return false;
}

StabilityConditions check_stability_conditions(const KineticsModel& model,
                                               const ConstantState& base,
                                               const std::vector<BranchFunction>& branches,
                                               double gamma) {
    (void)gamma;  // the sign conditions do not involve gamma; kept for the report context
    StabilityConditions out;
    const Linearization lin = linearization_at(model, base.u_bar, base.v_bar);
    out.s_A0.value = spectral_bound(lin.A);
    out.s_A0.pass = out.s_A0.value < 0;

    const int n = model.n;
    Eigen::MatrixXd block(n + 1, n + 1);
    block.topLeftCorner(n, n) = lin.A;
    block.topRightCorner(n, 1) = lin.B;
    block.bottomLeftCorner(1, n) = lin.C;
    block(n, n) = lin.d;
    out.s_block.value = spectral_bound(block);
    out.s_block.pass = out.s_block.value < 0;

    for (const auto& br : branches) {
        const Eigen::VectorXd u = br.eval(base.v_bar);
        SignCondition fu{spectral_bound(model.f_u(u, base.v_bar)), false};
        fu.pass = fu.value < 0;
        out.s_fu_branch.emplace_back(br.id, fu);
        SignCondition gv{model.g_v(u, base.v_bar), false};
        gv.pass = gv.value < 0;
        out.g_v_branch.emplace_back(br.id, gv);
    }
    return out;
}

Eigen::MatrixXd LinearizationData::A_at(int cell) const {
    Eigen::MatrixXd M(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) M(r, c) = A[static_cast<size_t>(cell) * n * n + r * n + c];
    return M;
}

Eigen::VectorXd LinearizationData::B_at(int cell) const {
    Eigen::VectorXd v(n);
    for (int r = 0; r < n; ++r) v(r) = B[static_cast<size_t>(cell) * n + r];
    return v;
}

Eigen::RowVectorXd LinearizationData::C_at(int cell) const {
    Eigen::RowVectorXd v(n);
    for (int c = 0; c < n; ++c) v(c) = C[static_cast<size_t>(cell) * n + c];
    return v;
}

LinearizationData linearize_on_solution(const KineticsModel& model,
                                        const StationarySolution& sol) {
    LinearizationData lin;
    lin.grid = sol.v.grid();
    lin.n = model.n;
    const int nc = lin.grid.cell_count(), n = model.n;
    lin.A.resize(static_cast<size_t>(nc) * n * n);
    lin.B.resize(static_cast<size_t>(nc) * n);
    lin.C.resize(static_cast<size_t>(nc) * n);
    lin.d.resize(nc);
    Eigen::VectorXd uc(n);
    for (int c = 0; c < nc; ++c) {
        for (int comp = 0; comp < n; ++comp) uc(comp) = sol.u.at(comp, c);
        const double v = sol.v[c];
        const Eigen::MatrixXd A = model.f_u(uc, v);
        const Eigen::VectorXd B = model.f_v(uc, v);
        const Eigen::RowVectorXd C = model.g_u(uc, v);
        for (int r = 0; r < n; ++r)
            for (int q = 0; q < n; ++q) lin.A[static_cast<size_t>(c) * n * n + r * n + q] = A(r, q);
        for (int r = 0; r < n; ++r) lin.B[static_cast<size_t>(c) * n + r] = B(r);
        for (int q = 0; q < n; ++q) lin.C[static_cast<size_t>(c) * n + q] = C(q);
        lin.d[c] = model.g_v(uc, v);
    }
    const Linearization base = linearization_at(model, sol.base.u_bar, sol.base.v_bar);
    lin.A0 = base.A;
    lin.B0 = base.B;
    lin.C0 = base.C;
    lin.d0 = base.d;
    return lin;
}

DeviationNorms deviation_norms(const LinearizationData& lin, int N_exponent) {
    if (N_exponent < 1) throw std::invalid_argument("deviation_norms: exponent must be >= 1");
    DeviationNorms out;
    out.exponent = N_exponent;
    const int nc = lin.grid.cell_count(), n = lin.n;
    const double vol = lin.grid.cell_volume();
    const double p = N_exponent;
    double sA = 0, sB = 0, sC = 0, sd = 0;
    for (int c = 0; c < nc; ++c) {
        double fa = 0, fb = 0, fc = 0;
        for (int r = 0; r < n; ++r)
            for (int q = 0; q < n; ++q) {
                const double dv = lin.A[static_cast<size_t>(c) * n * n + r * n + q] - lin.A0(r, q);
                fa += dv * dv;
            }
        for (int r = 0; r < n; ++r) {
            const double dv = lin.B[static_cast<size_t>(c) * n + r] - lin.B0(r);
            fb += dv * dv;
        }
        for (int q = 0; q < n; ++q) {
            const double dv = lin.C[static_cast<size_t>(c) * n + q] - lin.C0(q);
            fc += dv * dv;
        }
        sA += std::pow(std::sqrt(fa), p) * vol;
        sB += std::pow(std::sqrt(fb), p) * vol;
        sC += std::pow(std::sqrt(fc), p) * vol;
        sd += std::pow(std::abs(lin.d[c] - lin.d0), p) * vol;
    }
    out.dA = std::pow(sA, 1.0 / p);
    out.dB = std::pow(sB, 1.0 / p);
    out.dC = std::pow(sC, 1.0 / p);
    out.dd = std::pow(sd, 1.0 / p);
    return out;
}

HScanResult scan_h_function(std::span<const double> a, std::span<const double> b,
                            std::span<const double> c, std::span<const double> d,
                            const HScanOptions& opts) {
    HScanResult res;
    res.kappa = opts.kappa;
    const int nc = static_cast<int>(a.size());
    double ess_a = -std::numeric_limits<double>::infinity();
    double ess_d = -std::numeric_limits<double>::infinity();
    double coef_inf = 0;
    for (int i = 0; i < nc; ++i) {
        ess_a = std::max(ess_a, a[i]);
        ess_d = std::max(ess_d, d[i]);
        coef_inf = std::max({coef_inf, std::abs(a[i]), std::abs(b[i]), std::abs(c[i]),
                             std::abs(d[i])});
    }
    res.ess_sup_a = ess_a;
    res.ess_sup_d = ess_d;
    if (ess_a >= 0) {
        res.applicable = false;
        res.reason = "ess sup a(x) is not negative";
        return res;
    }
    res.applicable = true;
    res.alpha_max = opts.alpha_max > 0 ? opts.alpha_max : coef_inf + 1.0;
    res.beta_max = opts.beta_max > 0 ? opts.beta_max : coef_inf + 1.0;

    const int na = std::max(2, opts.alpha_samples), nb = std::max(2, opts.beta_samples);
    const double alpha_lo = -opts.kappa;
    double grid_sup = -std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(static) reduction(max : grid_sup)
    for (int cell = 0; cell < nc; ++cell) {
        const double cb = c[cell] * b[cell], ax = a[cell], dx = d[cell];
        double local = -std::numeric_limits<double>::infinity();
        for (int ja = 0; ja < na; ++ja) {
            const double alpha = alpha_lo + (res.alpha_max - alpha_lo) * ja / (na - 1);
            const double am = ax - alpha;
            for (int jb = 0; jb < nb; ++jb) {
                const double beta = res.beta_max * jb / (nb - 1);
                const double denom = am * am + beta * beta;
                double h;
                if (denom == 0.0)
                    h = cb == 0.0 ? dx - alpha : std::numeric_limits<double>::infinity();
                else
                    h = -cb * am / denom + dx - alpha;
                local = std::max(local, h);
            }
        }
        grid_sup = std::max(grid_sup, local);
    }
    res.grid_sup = grid_sup;
    // beta tail: h is monotone in beta^2 toward d - alpha, and d - alpha <= d + kappa
    res.tail_bound = ess_d + opts.kappa;
    // alpha tail: for alpha >= alpha_max, |cb|/(alpha - a) + d - alpha is decreasing in alpha
    double alpha_tail = -std::numeric_limits<double>::infinity();
    for (int cell = 0; cell < nc; ++cell) {
        const double gap = res.alpha_max - a[cell];
        alpha_tail = std::max(alpha_tail,
                              std::abs(c[cell] * b[cell]) / gap + d[cell] - res.alpha_max);
    }
    res.sup = std::max({grid_sup, res.tail_bound, alpha_tail});
    return res;
}

HScanResult scan_h_function(const LinearizationData& lin, const HScanOptions& opts) {
    HScanResult res;
    if (lin.n != 1) {
        res.applicable = false;
        res.reason = "h-scan requires n = 1";
        res.kappa = opts.kappa;
        return res;
    }
    return scan_h_function(lin.A, lin.B, lin.C, lin.d, opts);
}

namespace {

// matrix-free application of L to a stacked vector [phi_0.. phi_{n-1}, psi]
struct LinearOperatorApply {
    const LinearizationData& lin;
    double gamma;
    int nc, n;

    void apply(const double* x, double* y) const {
        const double* psi = x + static_cast<size_t>(n) * nc;
        double* ypsi = y + static_cast<size_t>(n) * nc;
        kernels::laplacian(lin.grid, psi, ypsi);
        for (int c = 0; c < nc; ++c) {
            double acc = gamma * ypsi[c] + lin.d[c] * psi[c];
            for (int q = 0; q < n; ++q)
                acc += lin.C[static_cast<size_t>(c) * n + q] * x[static_cast<size_t>(q) * nc + c];
            ypsi[c] = acc;
        }
        for (int r = 0; r < n; ++r) {
            double* yr = y + static_cast<size_t>(r) * nc;
            for (int c = 0; c < nc; ++c) {
                double acc = lin.B[static_cast<size_t>(c) * n + r] * psi[c];
                for (int q = 0; q < n; ++q)
                    acc += lin.A[static_cast<size_t>(c) * n * n + r * n + q] *
                           x[static_cast<size_t>(q) * nc + c];
                yr[c] = acc;
            }
        }
    }
};

SpectrumResult dense_spectrum(const LinearizationData& lin, double gamma, int n_report,
                              bool want_vector) {
    const int nc = lin.grid.cell_count(), n = lin.n;
    const int N = (n + 1) * nc;
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(N, N);
    const Grid& g = lin.grid;
    const double ihx2 = 1.0 / (g.hx * g.hx), ihy2 = 1.0 / (g.hy * g.hy);
    const int psi0 = n * nc;
    for (int c = 0; c < nc; ++c) {
        for (int r = 0; r < n; ++r) {
            for (int q = 0; q < n; ++q)
                L(r * nc + c, q * nc + c) = lin.A[static_cast<size_t>(c) * n * n + r * n + q];
            L(r * nc + c, psi0 + c) = lin.B[static_cast<size_t>(c) * n + r];
            L(psi0 + c, r * nc + c) = lin.C[static_cast<size_t>(c) * n + r];
        }
        L(psi0 + c, psi0 + c) += lin.d[c];
    }
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int c = g.index(i, j);
            const int im = i == 0 ? 0 : i - 1, ip = i == g.nx - 1 ? g.nx - 1 : i + 1;
            const int jm = j == 0 ? 0 : j - 1, jp = j == g.ny - 1 ? g.ny - 1 : j + 1;
            L(psi0 + c, psi0 + g.index(im, j)) += gamma * ihx2;
            L(psi0 + c, psi0 + g.index(ip, j)) += gamma * ihx2;
            L(psi0 + c, psi0 + c) += -2.0 * gamma * ihx2;
            L(psi0 + c, psi0 + g.index(i, jm)) += gamma * ihy2;
            L(psi0 + c, psi0 + g.index(i, jp)) += gamma * ihy2;
            L(psi0 + c, psi0 + c) += -2.0 * gamma * ihy2;
        }
    Eigen::EigenSolver<Eigen::MatrixXd> es(L, want_vector);
    if (es.info() != Eigen::Success) throw NumericError("discrete spectrum: eigensolver failed");
    std::vector<std::complex<double>> evs(es.eigenvalues().data(),
                                          es.eigenvalues().data() + N);
    std::sort(evs.begin(), evs.end(), [](auto x, auto y) {
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() > y.imag();
    });
    SpectrumResult out;
    out.max_re = evs.front().real();
    out.rightmost.assign(evs.begin(), evs.begin() + std::min<size_t>(n_report, evs.size()));
    out.method = "dense";
    if (want_vector) {
        int arg = 0;
        for (int i = 1; i < N; ++i)
            if (es.eigenvalues()(i).real() > es.eigenvalues()(arg).real()) arg = i;
        out.rightmost_vector.resize(N);
        for (int i = 0; i < N; ++i) out.rightmost_vector[i] = std::abs(es.eigenvectors()(i, arg));
    }
    return out;
}

SpectrumResult subspace_spectrum(const LinearizationData& lin, double gamma,
                                 const SpectrumOptions& opts) {
    const int nc = lin.grid.cell_count(), n = lin.n;
    const int N = (n + 1) * nc;
    const int m = std::max(opts.subspace_dim, opts.n_report + 4);
    LinearOperatorApply op{lin, gamma, nc, n};

    // Euler propagator I + dt*L: CFL for the diffusion block, shrunk for the
    // kinetic coupling so the dominant propagator modes are the rightmost of L
    double coef_inf = 0;
    for (double x : lin.A) coef_inf = std::max(coef_inf, std::abs(x));
    for (double x : lin.B) coef_inf = std::max(coef_inf, std::abs(x));
    for (double x : lin.C) coef_inf = std::max(coef_inf, std::abs(x));
    for (double x : lin.d) coef_inf = std::max(coef_inf, std::abs(x));
    const Grid& g = lin.grid;
    const double ihh = 1.0 / (g.hx * g.hx) + (g.ny > 1 ? 1.0 / (g.hy * g.hy) : 0.0);
    const double dt = std::min(0.45 / (gamma * ihh), 0.1 / std::max(coef_inf, 1e-12));

    std::mt19937_64 rng(20240513);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd X(N, m);
    for (int c = 0; c < m; ++c)
        for (int r = 0; r < N; ++r) X(r, c) = gauss(rng);

    Eigen::VectorXd work(N), work2(N);
    auto euler_burst = [&](Eigen::MatrixXd& Y, int steps) {
        for (int col = 0; col < m; ++col) {
            work = Y.col(col);
            for (int s = 0; s < steps; ++s) {
                op.apply(work.data(), work2.data());
                work += dt * work2;
            }
            Y.col(col) = work;
        }
    };

    double last = std::numeric_limits<double>::quiet_NaN();
    int stable_iters = 0;
    Eigen::VectorXcd ritz;
    for (int outer = 0; outer < opts.max_outer; ++outer) {
        euler_burst(X, 24);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
        X = qr.householderQ() * Eigen::MatrixXd::Identity(N, m);
        Eigen::MatrixXd LX(N, m);
        for (int col = 0; col < m; ++col) op.apply(X.col(col).data(), LX.col(col).data());
        const Eigen::MatrixXd H = X.transpose() * LX;
        Eigen::EigenSolver<Eigen::MatrixXd> es(H);
        if (es.info() != Eigen::Success) throw NumericError("subspace iteration: Ritz solve failed");
        ritz = es.eigenvalues();
        const double rightmost = ritz.real().maxCoeff();
        if (std::isfinite(last) &&
            std::abs(rightmost - last) <= opts.tol * std::max(1.0, std::abs(rightmost))) {
            if (++stable_iters >= 3) break;
        } else {
            stable_iters = 0;
        }
        last = rightmost;
    }
    std::vector<std::complex<double>> evs(ritz.data(), ritz.data() + ritz.size());
    std::sort(evs.begin(), evs.end(), [](auto x, auto y) {
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() > y.imag();
    });
    SpectrumResult out;
    out.max_re = evs.front().real();
    out.rightmost.assign(evs.begin(), evs.begin() + std::min<size_t>(opts.n_report, evs.size()));
    out.method = "subspace";
    return out;
}

}  // namespace

SpectrumResult discrete_linearized_spectrum(const LinearizationData& lin, double gamma,
                                            const SpectrumOptions& opts) {
    const int N = (lin.n + 1) * lin.grid.cell_count();
    if (N <= opts.dense_cap)
        return dense_spectrum(lin, gamma, opts.n_report, opts.want_rightmost_vector);
    if (!opts.allow_iterative)
        throw SizeError("discrete spectrum: " + std::to_string(N) +
                        " unknowns exceed the dense cap of " + std::to_string(opts.dense_cap) +
                        " and the iterative fallback is disabled");
    return subspace_spectrum(lin, gamma, opts);
}

StabilityReport analyze_stability(const KineticsModel& model, const StationarySolution& sol,
                                  const std::vector<BranchFunction>& branches,
                                  const StabilityOptions& opts) {
    StabilityReport rep;
    rep.gamma = sol.gamma;
    const Linearization lin0 = linearization_at(model, sol.base.u_bar, sol.base.v_bar);
    rep.resonance_condition = check_base_state_resonance(
        lin0.A, lin0.B, lin0.C, lin0.d, sol.gamma,
        modes_covering_ratio(sol.v.grid(), det_ratio(lin0.A, lin0.B, lin0.C, lin0.d), sol.gamma));
    rep.conditions = check_stability_conditions(model, sol.base, branches, sol.gamma);

    const LinearizationData lin = linearize_on_solution(model, sol);
    const int Nexp = opts.deviation_exponent > 0 ? opts.deviation_exponent
                                                 : (sol.v.grid().one_dimensional() ? 1 : 2);
    rep.deviations = deviation_norms(lin, Nexp);
    rep.h_scan = scan_h_function(lin, opts.h_scan);
    if (opts.run_spectrum) {
        try {
            rep.spectrum = discrete_linearized_spectrum(lin, sol.gamma, opts.spectrum);
        } catch (const SizeError&) {
            rep.spectrum.reset();  // corroboration only; certification stands without it
        }
    }

    // Certified stability needs every sign condition plus either the scalar
    // h-scan certificate (valid for every gamma) or the user-asserted
    // large-gamma route with deviation norms under the supplied threshold.
    const bool h_certified = rep.h_scan.applicable &&
                             rep.h_scan.ess_sup_a < -rep.h_scan.kappa && rep.h_scan.sup < 0;
    const bool deviation_certified =
        opts.deviation_threshold && rep.deviations.total() <= *opts.deviation_threshold;
    if (rep.conditions.any_branch_unstable())
        rep.classification = "unstable-by-ODE-spectrum";
    else if (rep.conditions.nonlinear_pass() && rep.resonance_condition.pass &&
             (h_certified || deviation_certified))
        rep.classification = "stable-certified-conditions";
    else
        rep.classification = "inconclusive";
    return rep;
}

std::string StabilityReport::to_json() const {
    nlohmann::json j;
    j["gamma"] = gamma;
    j["resonance_condition"] = {{"ratio", resonance_condition.ratio},
                           {"margin", resonance_condition.margin},
                           {"tolerance", resonance_condition.tolerance},
                           {"pass", resonance_condition.pass},
                           {"nearest_mode", {resonance_condition.nearest.k, resonance_condition.nearest.m}}};
    j["conditions"]["s_A0"] = {{"value", conditions.s_A0.value}, {"pass", conditions.s_A0.pass}};
    j["conditions"]["s_block"] = {{"value", conditions.s_block.value},
                                  {"pass", conditions.s_block.pass}};
    for (const auto& [id, c] : conditions.s_fu_branch)
        j["conditions"]["s_fu_branch"][std::to_string(id)] = {{"value", c.value},
                                                              {"pass", c.pass}};
    for (const auto& [id, c] : conditions.g_v_branch)
        j["conditions"]["g_v_branch"][std::to_string(id)] = {{"value", c.value}, {"pass", c.pass}};
    j["deviation_norms"] = {{"A", deviations.dA},
                            {"B", deviations.dB},
                            {"C", deviations.dC},
                            {"d", deviations.dd},
                            {"exponent", deviations.exponent}};
    j["h_scan"] = {{"applicable", h_scan.applicable}, {"sup", h_scan.sup},
                   {"grid_sup", h_scan.grid_sup},     {"tail_bound", h_scan.tail_bound},
                   {"ess_sup_a", h_scan.ess_sup_a},   {"ess_sup_d", h_scan.ess_sup_d},
                   {"kappa", h_scan.kappa},           {"alpha_max", h_scan.alpha_max},
                   {"beta_max", h_scan.beta_max},     {"reason", h_scan.reason}};
    if (spectrum) {
        nlohmann::json ev = nlohmann::json::array();
        for (const auto& z : spectrum->rightmost) ev.push_back({z.real(), z.imag()});
        j["discrete_spectrum"] = {{"max_re", spectrum->max_re},
                                  {"rightmost", ev},
                                  {"method", spectrum->method}};
    }
    j["classification"] = classification;
    return j.dump(2);
}

std::string StabilityReport::to_table() const {
    std::ostringstream os;
    auto line = [&](const std::string& name, double value, bool pass) {
        os << "  " << name;
        for (size_t i = name.size(); i < 34; ++i) os << ' ';
        os << (pass ? "pass " : "FAIL ") << value << "\n";
    };
    os << "stability report (gamma = " << gamma << ")\n";
    line("resonance margin", resonance_condition.margin, resonance_condition.pass);
    line("s(A0) < 0", conditions.s_A0.value, conditions.s_A0.pass);
    line("s(full block) < 0", conditions.s_block.value, conditions.s_block.pass);
    for (const auto& [id, c] : conditions.s_fu_branch)
        line("s(f_u at branch " + std::to_string(id) + ") < 0", c.value, c.pass);
    for (const auto& [id, c] : conditions.g_v_branch)
        line("g_v at branch " + std::to_string(id) + " < 0", c.value, c.pass);
    os << "  deviation norms (L^" << deviations.exponent << ")        A=" << deviations.dA
       << " B=" << deviations.dB << " C=" << deviations.dC << " d=" << deviations.dd << "\n";
    if (h_scan.applicable)
        os << "  h-scan sup = " << h_scan.sup << (h_scan.sup < 0 ? "  (certifies s(L) < 0)" : "")
           << "\n";
    else
        os << "  h-scan not applicable: " << h_scan.reason << "\n";
    if (spectrum)
        os << "  discrete spectral bound ~ " << spectrum->max_re << " (" << spectrum->method
           << ")\n";
    os << "  classification: " << classification << "\n";
    return os.str();
}

}  // namespace rdo
