// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion carries a wall-clock budget that is part of the
// verdict. Run through ctest ("acceptance") or directly.

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "rdo/config.hpp"
#include "rdo/cubic.hpp"
#include "rdo/dynamics.hpp"
#include "rdo/field_io.hpp"
#include "rdo/kinetics.hpp"
#include "rdo/laplacian.hpp"
#include "rdo/mask.hpp"
#include "rdo/resolvent.hpp"
#include "rdo/spectra.hpp"
#include "rdo/stability.hpp"
#include "rdo/stationary.hpp"
#include "support/models.hpp"
#include "support/newton_oracle.hpp"
#include "support/test_rng.hpp"

namespace fs = std::filesystem;
using namespace rdo;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream detail;
};

#define REQUIRE_THAT(v, cond, ...)                         \
    do {                                                   \
        if (!(cond)) {                                     \
            (v).pass = false;                              \
            char buf_[256];                                \
            std::snprintf(buf_, sizeof buf_, __VA_ARGS__); \
            (v).detail << " [" << buf_ << "]";             \
        }                                                  \
    } while (0)

const double kBeta = 0.5, kSigma = 0.02, kDelta = 1.0, kRho = 0.01, kGamma = 50.0;

StationarySolution construct_canonical(const KineticsModel& m, int n, int branch_2,
                                       double tol = 1e-10) {
    const auto states = constant_steady_states(m, {-1.0, 2.0, -1.0, 1.0}, 4096);
    const Grid g = build_grid(n, n, 1.0, 1.0);
    const MaskSpec spec = MaskSpec::pi_glyph(0.4, 0.4, 0.6, 0.6);
    return fixed_point_construct(m, g, make_mask(g, spec), states[0], fitzhugh_branch(m, 1),
                                 fitzhugh_branch(m, branch_2),
                                 {.gamma = kGamma, .tol = tol, .max_iter = 200}, spec);
}

// ---- criterion 1: determinant identity --------------------------------------
Verdict criterion_determinant_identity() {
    Verdict v;
    testsupport::Rng rng(1001);
    int accepted = 0;
    double worst = 0;
    while (accepted < 1000) {
        const int n = 1 + rng.below(5);
        Eigen::MatrixXcd A(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) A(r, c) = rng.uniform(-1, 1);
        Eigen::VectorXcd B(n);
        Eigen::RowVectorXcd C(n);
        for (int i = 0; i < n; ++i) {
            B(i) = rng.uniform(-1, 1);
            C(i) = rng.uniform(-1, 1);
        }
        const double d = rng.uniform(-1, 1);
        std::complex<double> lambda(rng.uniform(0, 10), rng.uniform(-10, 10));
        if (std::abs(lambda) > 10) continue;
        const Eigen::MatrixXcd As = A - lambda * Eigen::MatrixXcd::Identity(n, n);
        if (std::abs(As.determinant()) <= 1e-6) continue;
        ++accepted;
        Eigen::MatrixXcd block(n + 1, n + 1);
        block.topLeftCorner(n, n) = As;
        block.topRightCorner(n, 1) = B;
        block.bottomLeftCorner(1, n) = C;
        block(n, n) = d - lambda;
        const std::complex<double> lhs = d - lambda - (C * As.fullPivLu().solve(B))(0);
        const std::complex<double> rhs = block.determinant() / As.determinant();
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    v.detail << "worst relative mismatch " << worst << " over 1000 draws";
    REQUIRE_THAT(v, worst <= 1e-8, "mismatch %.3e > 1e-8", worst);
    return v;
}

// ---- criterion 2: resolvent exactness ----------------------------------------
Verdict criterion_resolvent_exactness() {
    Verdict v;
    testsupport::Rng rng(1002);
    const Grid g = build_grid(64, 64, 1.0, 1.0);
    const auto mu = discrete_laplacian_eigenvalues(g);
    double worst = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const double gamma = rng.uniform(0.1, 100.0);
        double b;
        for (;;) {
            b = rng.uniform(-80.0, 80.0);
            double gap = 1e300;
            for (double m : mu) gap = std::min(gap, std::abs(b - gamma * m));
            if (gap > 1e-3 * std::max(1.0, std::abs(b))) break;
        }
        ScalarField f(g);
        for (int c = 0; c < f.size(); ++c) f[c] = rng.uniform(-1, 1);
        const ScalarField sol = resolvent_solve(g, gamma, b, f);
        ScalarField res = apply_discrete_laplacian(sol);
        for (int c = 0; c < f.size(); ++c) res[c] = gamma * res[c] + b * sol[c] - f[c];
        worst = std::max(worst, sup_norm(res) / sup_norm(f));
    }
    v.detail << "worst relative residual " << worst << " over 50 solves";
    REQUIRE_THAT(v, worst <= 1e-10, "residual %.3e > 1e-10", worst);
    return v;
}

// ---- criterion 3: branch correctness -----------------------------------------
Verdict criterion_branch_correctness() {
    Verdict v;
    const KineticsModel m = fitzhugh_model(0.5, 1.0, 1.0, 1.0);
    const auto roots = branches_at(m, 0.0);
    REQUIRE_THAT(v, roots.size() == 3, "expected 3 roots at v=0, got %zu", roots.size());
    if (roots.size() == 3) {
        const double expect[3] = {0.0, 0.5, 1.0};
        for (int i = 0; i < 3; ++i)
            REQUIRE_THAT(v, std::abs(roots[i].u(0) - expect[i]) <= 1e-12,
                         "root %d = %.17g vs %.2f", i, roots[i].u(0), expect[i]);
    }
    testsupport::Rng rng(1003);
    double worst = 0;
    int triples = 0;
    for (int trial = 0; trial < 4000; ++trial) {
        const double beta = rng.uniform(0.05, 0.95);
        const double s = std::sqrt(1.0 - beta + beta * beta);
        const double um = ((1 + beta) - s) / 3.0, up = ((1 + beta) + s) / 3.0;
        const double vv = rng.uniform(um * (1 - um) * (um - beta), up * (1 - up) * (up - beta));
        const auto rs = real_cubic_roots(-(1 + beta), beta, vv);
        bool degenerate = false;
        for (const auto& r : rs) degenerate |= r.degenerate;
        if (rs.size() != 3 || degenerate) continue;
        ++triples;
        const double r0 = rs[0].value, r1 = rs[1].value, r2 = rs[2].value;
        const double scale = 1.0 + std::abs(1 + beta) + beta + std::abs(vv);
        worst = std::max(worst, std::abs(r0 + r1 + r2 - (1 + beta)) / scale);
        worst = std::max(worst, std::abs(r0 * r1 + r0 * r2 + r1 * r2 - beta) / scale);
        worst = std::max(worst, std::abs(r0 * r1 * r2 + vv) / scale);
    }
    v.detail << "exact roots at v=0; reassembly worst " << worst << " over " << triples
             << " triples";
    REQUIRE_THAT(v, worst <= 1e-9, "reassembly %.3e > 1e-9", worst);
    REQUIRE_THAT(v, triples >= 2000, "too few three-root samples: %d", triples);
    return v;
}

// ---- criterion 4: construction -----------------------------------------------
Verdict criterion_construction() {
    Verdict v;
    const KineticsModel m = fitzhugh_model(kBeta, kSigma, kDelta, kRho);
    const Grid g = build_grid(64, 64, 1.0, 1.0);
    const MaskSpec spec = MaskSpec::pi_glyph(0.4, 0.4, 0.6, 0.6);
    const SubdomainMask mask = make_mask(g, spec);
    REQUIRE_THAT(v, mask.measure(2) <= 0.01 * g.volume(), "glyph measure %.4f%% > 1%%",
                 100 * mask.measure(2) / g.volume());

    const auto sol = construct_canonical(m, 64, 2);
    v.detail << sol.diag.iterations << " iterations, g-residual " << sol.diag.g_res_inf
             << ", eps " << sol.diag.eps_measured;
    REQUIRE_THAT(v, sol.diag.iterations <= 200, "no convergence in 200");
    REQUIRE_THAT(v, sol.diag.g_res_inf <= 1e-8, "g-residual %.3e > 1e-8", sol.diag.g_res_inf);

    const auto states = constant_steady_states(m, {-1.0, 2.0, -1.0, 1.0}, 4096);
    double prev_eps = 1e300;
    bool monotone = true;
    for (double half : {0.10, 0.05, 0.025}) {
        const MaskSpec s2 = MaskSpec::pi_glyph(0.5 - half, 0.5 - half, 0.5 + half, 0.5 + half);
        const auto sol2 = fixed_point_construct(m, g, make_mask(g, s2), states[0],
                                                fitzhugh_branch(m, 1), fitzhugh_branch(m, 2),
                                                {.gamma = kGamma, .tol = 1e-10, .max_iter = 200},
                                                s2);
        monotone &= sol2.diag.eps_measured <= prev_eps;
        prev_eps = sol2.diag.eps_measured;
    }
    REQUIRE_THAT(v, monotone, "eps did not decrease across dyadic shrinkages");

    const Grid g32 = build_grid(32, 32, 1.0, 1.0);
    const SubdomainMask mask32 = make_mask(g32, spec);
    const std::vector<BranchFunction> branches{fitzhugh_branch(m, 1), fitzhugh_branch(m, 2)};
    const auto sol32 = multi_branch_construct(m, g32, mask32, states[0], branches,
                                              {.gamma = kGamma, .tol = 1e-12, .max_iter = 200},
                                              spec);
    const ScalarField newton =
        testsupport::newton_stationary_solve(m, g32, mask32, branches, kGamma,
                                             ScalarField(g32, states[0].v_bar));
    const double dist = sup_norm_diff(sol32.v, newton);
    v.detail << ", Newton distance " << dist;
    REQUIRE_THAT(v, dist <= 1e-7, "Newton oracle distance %.3e > 1e-7", dist);
    return v;
}

// ---- criterion 5: spectrum consistency ----------------------------------------
Verdict criterion_spectrum_consistency() {
    Verdict v;
    const KineticsModel m = fitzhugh_model(kBeta, kSigma, kDelta, kRho);
    const auto states = constant_steady_states(m, {-1.0, 2.0, -1.0, 1.0}, 4096);
    const Grid g = build_grid(16, 16, 1.0, 1.0);
    const double gamma = 3.0;

    StationarySolution flat;
    flat.u = VectorField(g, 1, states[0].u_bar(0));
    flat.v = ScalarField(g, states[0].v_bar);
    flat.mask = make_mask(g, MaskSpec::full());
    flat.base = states[0];
    flat.gamma = gamma;
    const auto lin = linearize_on_solution(m, flat);
    SpectrumOptions opts;
    opts.n_report = 2 * g.cell_count();
    const auto spec = discrete_linearized_spectrum(lin, gamma, opts);

    // mode-wise 2x2 symbol oracle through the cosine diagonalization
    std::vector<std::complex<double>> symbol;
    for (double mode : discrete_laplacian_eigenvalues(g)) {
        const double a = lin.A0(0, 0), b = lin.B0(0), c = lin.C0(0), d = lin.d0 - gamma * mode;
        const double tr = a + d, det = a * d - b * c, disc = tr * tr - 4 * det;
        if (disc >= 0) {
            symbol.emplace_back(0.5 * (tr + std::sqrt(disc)), 0.0);
            symbol.emplace_back(0.5 * (tr - std::sqrt(disc)), 0.0);
        } else {
            symbol.emplace_back(0.5 * tr, 0.5 * std::sqrt(-disc));
            symbol.emplace_back(0.5 * tr, -0.5 * std::sqrt(-disc));
        }
    }
    auto by_re_im = [](const std::complex<double>& x, const std::complex<double>& y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    };
    std::vector<std::complex<double>> dense = spec.rightmost;
    std::sort(dense.begin(), dense.end(), by_re_im);
    std::sort(symbol.begin(), symbol.end(), by_re_im);
    REQUIRE_THAT(v, dense.size() == symbol.size(), "eigenvalue count %zu vs %zu", dense.size(),
                 symbol.size());
    double worst = 0;
    for (size_t i = 0; i < std::min(dense.size(), symbol.size()); ++i)
        worst = std::max(worst, std::abs(dense[i] - symbol[i]) / (1.0 + std::abs(symbol[i])));
    v.detail << "constant-coefficient worst mismatch " << worst;
    REQUIRE_THAT(v, worst <= 1e-8, "mode-symbol mismatch %.3e > 1e-8", worst);

    // piecewise-constant A with B = C = 0: max Re from the cell values alone
    LinearizationData pc = lin;
    const SubdomainMask patch = make_mask(g, MaskSpec::rectangle(0.0, 0.0, 0.4, 0.4));
    std::fill(pc.B.begin(), pc.B.end(), 0.0);
    std::fill(pc.C.begin(), pc.C.end(), 0.0);
    pc.B0.setZero();
    pc.C0.setZero();
    double cellwise = -1e300;
    for (int c = 0; c < g.cell_count(); ++c) {
        pc.A[c] = patch.label(c) == 2 ? -0.3 : -0.9;
        pc.d[c] = -2.0;
        cellwise = std::max(cellwise, pc.A[c]);
    }
    const auto spec2 = discrete_linearized_spectrum(pc, gamma, {.n_report = 4});
    v.detail << "; multiplication bound " << spec2.max_re << " vs " << cellwise;
    REQUIRE_THAT(v, std::abs(spec2.max_re - cellwise) <= 1e-8, "bound mismatch %.3e",
                 std::abs(spec2.max_re - cellwise));
    return v;
}

// ---- criterion 6: stability dichotomy ------------------------------------------
Verdict criterion_dichotomy() {
    Verdict v;
    const KineticsModel m = fitzhugh_model(kBeta, kSigma, kDelta, kRho);
    const auto stable_sol = construct_canonical(m, 64, 2);
    const auto unstable_sol = construct_canonical(m, 64, 3);

    StabilityOptions sopts;
    sopts.run_spectrum = false;
    const auto rep =
        analyze_stability(m, stable_sol, {fitzhugh_branch(m, 1), fitzhugh_branch(m, 2)}, sopts);
    REQUIRE_THAT(v, rep.classification == "stable-certified-conditions",
                 "stable run not certified: %s", rep.classification.c_str());

    const double t_stable = 5.5, t_unstable = 10.75;
    auto run = [&m](const StationarySolution& sol, double t_end) {
        const SimulationState init = perturb(sol, 1e-2, PerturbMode::uniform_shift);
        SimulateOptions opts;
        opts.t_end = t_end;
        return simulate(m, kGamma, init, opts, &sol);
    };
    auto fut = std::async(std::launch::async, run, std::cref(unstable_sol), t_unstable);
    const SimulationTrace stable_trace = run(stable_sol, t_stable);
    const SimulationTrace unstable_trace = fut.get();

    const DecayFit fit = fit_decay_rate(stable_trace, 0.1 * t_stable, t_stable);
    const double ratio = stable_trace.deviation.back() / stable_trace.deviation.front();
    v.detail << "stable: k_est " << fit.k_est << ", r2 " << fit.r_squared << ", ratio " << ratio;
    REQUIRE_THAT(v, fit.k_est > 0, "k_est %.3f not positive", fit.k_est);
    REQUIRE_THAT(v, fit.r_squared >= 0.95, "r2 %.3f < 0.95", fit.r_squared);
    REQUIRE_THAT(v, ratio <= 0.1, "deviation ratio %.3f > 0.1", ratio);

    const double growth = unstable_trace.deviation.back() / unstable_trace.deviation.front();
    const DecayFit ufit = fit_decay_rate(unstable_trace, 0.1 * t_unstable, t_unstable);
    v.detail << "; unstable growth " << growth << "x (k_est " << ufit.k_est << ")";
    REQUIRE_THAT(v, growth >= 10.0, "growth %.2fx < 10x", growth);
    REQUIRE_THAT(v, ufit.k_est < 0, "unstable k_est %.3f not negative", ufit.k_est);
    return v;
}

// ---- criterion 7: scalar certification ------------------------------------------
Verdict criterion_scalar_certification() {
    Verdict v;
    const KineticsModel m = fitzhugh_model(kBeta, kSigma, kDelta, kRho);
    const auto sol = construct_canonical(m, 64, 2);
    const auto lin = linearize_on_solution(m, sol);
    HScanOptions opts;
    opts.kappa = 0.01;
    const auto res = scan_h_function(lin, opts);
    v.detail << "sup " << res.sup;
    REQUIRE_THAT(v, res.applicable, "scan not applicable");
    REQUIRE_THAT(v, res.sup < 0, "sup %.4f not negative", res.sup);

    LinearizationData flipped = lin;
    for (double& x : flipped.d) x = +kDelta;
    flipped.d0 = +kDelta;
    const auto res2 = scan_h_function(flipped, opts);
    v.detail << "; flipped-d sup " << res2.sup << " (tail " << res2.tail_bound << ")";
    REQUIRE_THAT(v, res2.sup >= res2.ess_sup_d - 1e-12, "tail bound not engaged");
    REQUIRE_THAT(v, res2.sup > 0, "certification not withdrawn");
    return v;
}

// ---- criterion 8: Euler consistency ----------------------------------------------
Verdict criterion_euler_consistency() {
    Verdict v;
    const Grid g = build_grid(32, 32, 1.0, 1.0);
    const double gamma = 1.0, a0 = 0.3, a1 = -1.2, c0 = 0.4, c1 = 0.8;
    const KineticsModel m = testsupport::affine_model(a0, a1, c0, c1);
    const double mu1 = discrete_axis_eigenvalues(g.nx, g.hx)[1];
    const double pi = std::numbers::pi;
    SimulationState init{0.0, VectorField(g, 1), ScalarField(g)};
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            init.v.at(i, j) = c0 / c1 + std::cos(pi * g.x_center(i) / g.lx);
            init.u.at(0, g.index(i, j)) = -a0 / a1 + 0.5;
        }
    const double t_end = 0.2;
    // dt divides t_end exactly so every run lands on the same final time
    auto err_at = [&](long n) {
        const double dt = t_end / n;
        SimulationState s = init;
        for (long it = 0; it < n; ++it) s = step_euler(m, gamma, s, dt);
        double err = 0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double vex = c0 / c1 + std::cos(pi * g.x_center(i) / g.lx) *
                                                 std::exp(-(gamma * mu1 + c1) * t_end);
                const double uex = -a0 / a1 + 0.5 * std::exp(a1 * t_end);
                err = std::max(err, std::abs(s.v.at(i, j) - vex));
                err = std::max(err, std::abs(s.u.at(0, g.index(i, j)) - uex));
            }
        return err;
    };
    const long n0 = std::lround(std::ceil(t_end / (0.8 * cfl_max_dt(g, gamma))));
    const double e0 = err_at(n0), e1 = err_at(2 * n0), e2 = err_at(4 * n0);
    const double o1 = std::log2(e0 / e1), o2 = std::log2(e1 / e2);
    v.detail << "observed orders " << o1 << ", " << o2;
    REQUIRE_THAT(v, o1 >= 0.8 && o1 <= 1.2, "order %.3f outside [0.8, 1.2]", o1);
    REQUIRE_THAT(v, o2 >= 0.8 && o2 <= 1.2, "order %.3f outside [0.8, 1.2]", o2);
    return v;
}

// ---- criterion 9: nullcline structure ---------------------------------------------
Verdict criterion_nullcline_structure() {
    Verdict v;
    const KineticsModel m = fitzhugh_model(kBeta, kSigma, kDelta, kRho);
    const auto states = constant_steady_states(m, {-2.0, 3.0, -10.0, 10.0}, 8192);
    REQUIRE_THAT(v, states.size() == 3, "expected 3 states, got %zu", states.size());
    if (states.size() == 3) {
        const double u1 = states[0].u_bar(0), u2 = states[1].u_bar(0), u3 = states[2].u_bar(0);
        v.detail << "states " << u1 << " < " << u2 << " < " << u3;
        REQUIRE_THAT(v, u1 < u2 && u2 < u3, "states not ascending");
        const double f1 = m.f_u(states[0].u_bar, states[0].v_bar)(0, 0);
        const double f2 = m.f_u(states[1].u_bar, states[1].v_bar)(0, 0);
        const double f3 = m.f_u(states[2].u_bar, states[2].v_bar)(0, 0);
        REQUIRE_THAT(v, f1 < 0, "f_u(U1) = %.3f not negative", f1);
        REQUIRE_THAT(v, f3 < 0, "f_u(U3) = %.3f not negative", f3);
        REQUIRE_THAT(v, f2 > 0, "f_u(U2) = %.3f not positive (middle branch)", f2);
    }
    return v;
}

// ---- criterion 10: reproducibility ---------------------------------------------
Verdict criterion_reproducibility() {
    Verdict v;
    const fs::path dir = fs::temp_directory_path() / "rdo_acceptance_repro";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path cfg = dir / "exp.cfg";
    {
        std::ofstream out(cfg);
        out << "[model]\nname = fitzhugh\nbeta = 0.5\nsigma = 0.02\ndelta = 1.0\nrho = 0.01\n"
               "[grid]\nnx = 16\nny = 16\n"
               "[mask]\nshape = random\nfraction = 0.02\nseed = 11\n"
               "[construction]\ngamma = 50.0\nbranches = 1,2\n"
               "[stability]\nrun_discrete_spectrum = false\n"
               "[time]\nt_end = 0.02\n"
               "[perturbation]\nmode = random\namplitude = 0.01\nseed = 5\n";
    }
    auto shell = [](const std::string& cmd) {
        return WEXITSTATUS(std::system((cmd + " > /dev/null 2>&1").c_str()));
    };
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const int rc1 = shell(std::string(RDLAB_BIN) + " simulate --config " + cfg.string() +
                          " --out " + (dir / "run1").string() + " --threads 2");
    REQUIRE_THAT(v, rc1 == 0, "first run exited with %d", rc1);
    const int rc2 = shell(std::string(RDLAB_BIN) + " simulate --config " +
                          (dir / "run1" / "manifest.json").string() + " --out " +
                          (dir / "run2").string() + " --threads 2");
    REQUIRE_THAT(v, rc2 == 0, "manifest re-run exited with %d", rc2);
    const std::string a = slurp(dir / "run1" / "norms.csv");
    const std::string b = slurp(dir / "run2" / "norms.csv");
    REQUIRE_THAT(v, !a.empty() && a == b, "norms.csv differs between runs");
    v.detail << "norms.csv identical across manifest re-run (" << a.size() << " bytes)";
    fs::remove_all(dir);
    return v;
}

struct Criterion {
    const char* name;
    double budget_seconds;
    Verdict (*fn)();
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {"determinant identity (1000 random instances)", 5.0, criterion_determinant_identity},
        {"resolvent exactness (50 random solves, 64x64)", 10.0, criterion_resolvent_exactness},
        {"branch correctness (exact roots + reassembly)", 1.0, criterion_branch_correctness},
        {"construction (canonical pi-glyph, Newton oracle)", 30.0, criterion_construction},
        {"spectrum consistency (mode symbols, 16x16)", 20.0, criterion_spectrum_consistency},
        {"stability dichotomy (64x64, both branches)", 120.0, criterion_dichotomy},
        {"scalar certification (h-scan, kappa = 0.01)", 30.0, criterion_scalar_certification},
        {"Euler consistency (manufactured solution)", 30.0, criterion_euler_consistency},
        {"nullcline structure (3 states, sign pattern)", 1.0, criterion_nullcline_structure},
        {"reproducibility (manifest re-run, bitwise)", 60.0, criterion_reproducibility},
    };
    int failures = 0;
    int index = 0;
    for (const Criterion& c : criteria) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.fn();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail << " [exception: " << e.what() << "]";
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = elapsed < c.budget_seconds;
        const bool pass = v.pass && in_budget;
        if (!pass) ++failures;
        std::printf("[%s] criterion %2d: %s  (%.2f s%s budget %.0f s)  %s\n",
                    pass ? "PASS" : "FAIL", index, c.name, elapsed, in_budget ? " <" : " >=",
                    c.budget_seconds, v.detail.str().c_str());
        std::fflush(stdout);
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures;
}
