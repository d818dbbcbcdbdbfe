#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <complex>

#include "rdo/errors.hpp"
#include "rdo/kinetics.hpp"
#include "rdo/mask.hpp"
#include "rdo/spectra.hpp"
#include "rdo/stability.hpp"
#include "rdo/stationary.hpp"
#include "support/charpoly_oracle.hpp"
#include "support/test_rng.hpp"

using namespace rdo;

namespace {

const double kBeta = 0.5, kSigma = 0.02, kDelta = 1.0, kRho = 0.01, kGamma = 50.0;

Eigen::MatrixXd random_matrix(testsupport::Rng& rng, int n, double lo = -1, double hi = 1) {
    Eigen::MatrixXd M(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) M(r, c) = rng.uniform(lo, hi);
    return M;
}

StationarySolution canonical_solution(const KineticsModel& m, int n, int branch_2 = 2) {
    const auto states = constant_steady_states(m, {-1.0, 2.0, -1.0, 1.0}, 4096);
    REQUIRE(states.size() == 3);
    const Grid g = build_grid(n, n, 1.0, 1.0);
    const MaskSpec spec = MaskSpec::pi_glyph(0.4, 0.4, 0.6, 0.6);
    return fixed_point_construct(m, g, make_mask(g, spec), states[0], fitzhugh_branch(m, 1),
                                 fitzhugh_branch(m, branch_2),
                                 {.gamma = kGamma, .tol = 1e-11, .max_iter = 200}, spec);
}

}  // namespace

TEST_CASE("spectral bound basics") {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
    d(0, 0) = -1;
    d(1, 1) = -2;
    CHECK(spectral_bound(d) == doctest::Approx(-1.0).epsilon(1e-14));

    Eigen::MatrixXd rot(2, 2);
    rot << 0, 1, -1, 0;
    CHECK(spectral_bound(rot) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("spectral bound matches the characteristic-polynomial oracle on random 3x3") {
    testsupport::Rng rng(41);
    for (int trial = 0; trial < 300; ++trial) {
        const Eigen::MatrixXd M = random_matrix(rng, 3, -2, 2);
        const double lib = spectral_bound(M);
        const double oracle = testsupport::spectral_bound_oracle_3x3(M);
        CHECK(std::abs(lib - oracle) <= 1e-9 * (1.0 + std::abs(oracle)));
    }
}

TEST_CASE("shift and similarity invariance of the spectral bound") {
    testsupport::Rng rng(43);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + rng.below(4);
        const Eigen::MatrixXd M = random_matrix(rng, n, -2, 2);
        const double s = spectral_bound(M);
        const double c = rng.uniform(-3, 3);
        CHECK(spectral_bound(M + c * Eigen::MatrixXd::Identity(n, n)) ==
              doctest::Approx(s + c).epsilon(1e-8));
        // well-conditioned random similarity
        Eigen::MatrixXd P = random_matrix(rng, n, -1, 1) + 3.0 * Eigen::MatrixXd::Identity(n, n);
        CHECK(spectral_bound(P.inverse() * M * P) == doctest::Approx(s).epsilon(1e-8));
    }
}

TEST_CASE("spectral radius bounded by the Frobenius norm") {
    testsupport::Rng rng(47);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + rng.below(5);
        const Eigen::MatrixXd M = random_matrix(rng, n);
        Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
        const double radius = es.eigenvalues().cwiseAbs().maxCoeff();
        CHECK(radius <= M.norm() * (1.0 + 1e-12));
    }
}

TEST_CASE("det_ratio closed forms") {
    // n = 1: (a*d - b*c) / a
    Eigen::MatrixXd A(1, 1);
    Eigen::VectorXd B(1);
    Eigen::RowVectorXd C(1);
    A << -0.5;
    B << -1.0;
    C << 1.0;
    CHECK(det_ratio(A, B, C, -1.0) == doctest::Approx(-3.0).epsilon(1e-13));

    // block-triangular cases return d0
    testsupport::Rng rng(53);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + rng.below(4);
        Eigen::MatrixXd A0 = random_matrix(rng, n) + 2.0 * Eigen::MatrixXd::Identity(n, n);
        Eigen::VectorXd B0 = Eigen::VectorXd::Zero(n);
        Eigen::RowVectorXd C0 = Eigen::RowVectorXd::Zero(n);
        const double d0 = rng.uniform(-2, 2);
        CHECK(det_ratio(A0, B0, C0, d0) == doctest::Approx(d0).epsilon(1e-10));
        for (int i = 0; i < n; ++i) C0(i) = rng.uniform(-1, 1);
        CHECK(det_ratio(A0, Eigen::VectorXd::Zero(n), C0, d0) == doctest::Approx(d0).epsilon(1e-10));
    }
}

TEST_CASE("determinant identity holds for random complex shifts") {
    testsupport::Rng rng(59);
    int accepted = 0;
    while (accepted < 1000) {
        const int n = 1 + rng.below(5);
        const Eigen::MatrixXd A = random_matrix(rng, n);
        Eigen::VectorXd B(n);
        Eigen::RowVectorXd C(n);
        for (int i = 0; i < n; ++i) {
            B(i) = rng.uniform(-1, 1);
            C(i) = rng.uniform(-1, 1);
        }
        const double d = rng.uniform(-1, 1);
        const std::complex<double> lambda(rng.uniform(0, 10), rng.uniform(-10, 10));
        const Eigen::MatrixXcd Ashift =
            A.cast<std::complex<double>>() -
            lambda * Eigen::MatrixXcd::Identity(n, n);
        if (std::abs(Ashift.determinant()) <= 1e-6) continue;
        ++accepted;
        Eigen::MatrixXcd block(n + 1, n + 1);
        block.topLeftCorner(n, n) = Ashift;
        block.topRightCorner(n, 1) = B.cast<std::complex<double>>();
        block.bottomLeftCorner(1, n) = C.cast<std::complex<double>>();
        block(n, n) = d - lambda;
        const std::complex<double> lhs =
            d - lambda -
            (C.cast<std::complex<double>>() * Ashift.fullPivLu().solve(
                                                  B.cast<std::complex<double>>()))(0);
        const std::complex<double> rhs = block.determinant() / Ashift.determinant();
        CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("base-state resonance margins") {
    const Grid g = build_grid(8, 8, 1.0, 1.0);
    Eigen::MatrixXd A(1, 1);
    Eigen::VectorXd B(1);
    Eigen::RowVectorXd C(1);
    A << -0.5;
    B << -1.0;
    C << 1.0;
    // ratio = -3: every gamma*mu_k is >= 0, margin is 3
    auto rep = check_base_state_resonance(A, B, C, -1.0, 1.0, modes_covering_ratio(g, -3.0, 1.0));
    CHECK(rep.pass);
    CHECK(rep.margin == doctest::Approx(3.0).epsilon(1e-12));

    // engineered resonance: ratio = gamma*mu_1 = pi^2 on the unit square
    // with a = -1, b = c = 0 the ratio equals d0; pick d0 = gamma*pi^2
    const double pi2 = neumann_eigenvalues(g, 2)[1].mu;
    Eigen::MatrixXd A2(1, 1);
    A2 << -1.0;
    auto rep2 = check_base_state_resonance(A2, Eigen::VectorXd::Zero(1), Eigen::RowVectorXd::Zero(1),
                                     pi2, 1.0, modes_covering_ratio(g, pi2, 1.0));
    CHECK_FALSE(rep2.pass);
    CHECK(((rep2.nearest.k == 1 && rep2.nearest.m == 0) ||
           (rep2.nearest.k == 0 && rep2.nearest.m == 1)));
}

TEST_CASE("stability conditions for the canonical left state") {
    const KineticsModel m = fitzhugh_model(kBeta, kSigma, kDelta, kRho);
    const auto states = constant_steady_states(m, {-1.0, 2.0, -1.0, 1.0}, 4096);
    REQUIRE(states.size() == 3);
    const std::vector<BranchFunction> b12{fitzhugh_branch(m, 1), fitzhugh_branch(m, 2)};
    const auto cond = check_stability_conditions(m, states[0], b12, kGamma);
    CHECK(cond.s_A0.pass);
    CHECK(cond.s_block.pass);
    CHECK(cond.linear_pass());
    CHECK(cond.nonlinear_pass());
    CHECK_FALSE(cond.any_branch_unstable());

    // the middle branch is ODE-unstable: s(f_u(k3)) > 0
    const std::vector<BranchFunction> b13{fitzhugh_branch(m, 1), fitzhugh_branch(m, 3)};
    const auto cond3 = check_stability_conditions(m, states[0], b13, kGamma);
    CHECK(cond3.any_branch_unstable());
    CHECK_FALSE(cond3.linear_pass());
}

TEST_CASE("nonlinear verdict withheld when g_v is not negative") {
    // synthetic: flip the sign of delta through a handmade model
    KineticsModel m = fitzhugh_model(kBeta, kSigma, kDelta, kRho);
    m.g_v = [](const Eigen::VectorXd&, double) { return +0.3; };
    const auto states = constant_steady_states(m, {-1.0, 2.0, -1.0, 1.0}, 4096);
    const std::vector<BranchFunction> b12{fitzhugh_branch(m, 1), fitzhugh_branch(m, 2)};
    const auto cond = check_stability_conditions(m, states[0], b12, kGamma);
    CHECK_FALSE(cond.nonlinear_pass());
}

TEST_CASE("deviation norms vanish for constant coefficients and scale as J*m^(1/N)") {
    const KineticsModel m = fitzhugh_model(kBeta, kSigma, kDelta, kRho);
    const auto states = constant_steady_states(m, {-1.0, 2.0, -1.0, 1.0}, 4096);
    const Grid g = build_grid(16, 16, 1.0, 1.0);

    // constant broadcast: all deviations zero
    StationarySolution flat;
    flat.u = VectorField(g, 1, states[0].u_bar(0));
    flat.v = ScalarField(g, states[0].v_bar);
    flat.mask = make_mask(g, MaskSpec::full());
    flat.base = states[0];
    flat.gamma = kGamma;
    auto lin = linearize_on_solution(m, flat);
    auto dev = deviation_norms(lin, 2);
    CHECK(dev.dA == 0.0);
    CHECK(dev.dB == 0.0);
    CHECK(dev.dC == 0.0);
    CHECK(dev.dd == 0.0);

    // two-plateau A(x): ||A - A0||_{L^N} = J * m^(1/N) with A = A0 on label 1
    LinearizationData two = lin;
    const SubdomainMask mask = make_mask(g, MaskSpec::rectangle(0.0, 0.0, 0.25, 0.25));
    const double J = 0.7;
    for (int c = 0; c < g.cell_count(); ++c)
        if (mask.label(c) == 2) two.A[c] = two.A0(0, 0) + J;
    const double measure = mask.measure(2);
    auto dev2 = deviation_norms(two, 2);
    CHECK(dev2.dA == doctest::Approx(J * std::sqrt(measure)).epsilon(1e-12));
}

TEST_CASE("deviation norms shrink with the mask across dyadic sizes") {
    const KineticsModel m = fitzhugh_model(kBeta, kSigma, kDelta, kRho);
    const auto states = constant_steady_states(m, {-1.0, 2.0, -1.0, 1.0}, 4096);
    const Grid g = build_grid(64, 64, 1.0, 1.0);
    double prev = 1e300;
    for (double half : {0.10, 0.05, 0.025}) {
        const MaskSpec spec = MaskSpec::pi_glyph(0.5 - half, 0.5 - half, 0.5 + half, 0.5 + half);
        const auto sol = fixed_point_construct(m, g, make_mask(g, spec), states[0],
                                               fitzhugh_branch(m, 1), fitzhugh_branch(m, 2),
                                               {.gamma = kGamma, .tol = 1e-10, .max_iter = 200},
                                               spec);
        const auto dev = deviation_norms(linearize_on_solution(m, sol), 2);
        const double total = dev.total();
        CHECK(total < prev);
        prev = total;
    }
}

TEST_CASE("h-scan: decoupled case and evenness") {
    const int nc = 8;
    std::vector<double> a(nc, -1.0), b(nc, 0.0), c(nc, 0.0), d(nc, -1.0);
    HScanOptions opts;
    opts.kappa = 0.01;
    const auto res = scan_h_function(a, b, c, d, opts);
    REQUIRE(res.applicable);
    // h = d - alpha peaks at alpha = -kappa
    CHECK(res.sup == doctest::Approx(-1.0 + 0.01).epsilon(1e-12));

    // evenness in beta comes from the beta^2 dependence
    testsupport::Rng rng(61);
    for (int trial = 0; trial < 200; ++trial) {
        const double av = rng.uniform(-3, -0.5), bv = rng.uniform(-2, 2), cv = rng.uniform(-2, 2),
                     dv = rng.uniform(-2, 0), alpha = rng.uniform(-0.01, 2),
                     beta = rng.uniform(0, 3);
        auto h = [&](double be) {
            const double am = av - alpha;
            return -cv * bv * am / (am * am + be * be) + dv - alpha;
        };
        CHECK(h(beta) == h(-beta));
    }
}

TEST_CASE("h is monotone in beta^2 at fixed alpha") {
    testsupport::Rng rng(67);
    for (int trial = 0; trial < 200; ++trial) {
        const double av = rng.uniform(-3, -0.1), bv = rng.uniform(-2, 2), cv = rng.uniform(-2, 2),
                     dv = rng.uniform(-2, 2), alpha = rng.uniform(-0.01, 1);
        const double am = av - alpha;
        double prev = -cv * bv * am / (am * am) + dv - alpha;
        bool increasing = true, decreasing = true;
        for (double beta : {0.5, 1.0, 2.0, 4.0, 8.0}) {
            const double h = -cv * bv * am / (am * am + beta * beta) + dv - alpha;
            increasing &= h >= prev - 1e-15;
            decreasing &= h <= prev + 1e-15;
            prev = h;
        }
        CHECK((increasing || decreasing));
    }
}

TEST_CASE("h-scan certifies the canonical construction and withdraws when d flips") {
    const KineticsModel m = fitzhugh_model(kBeta, kSigma, kDelta, kRho);
    const auto sol = canonical_solution(m, 32);
    auto lin = linearize_on_solution(m, sol);
    const auto res = scan_h_function(lin);
    REQUIRE(res.applicable);
    CHECK(res.ess_sup_a < -res.kappa);
    CHECK(res.sup < 0.0);

    // flipping d to +delta must withdraw the certificate via the tail bound
    LinearizationData flipped = lin;
    for (double& x : flipped.d) x = +kDelta;
    flipped.d0 = +kDelta;
    const auto res2 = scan_h_function(flipped);
    REQUIRE(res2.applicable);
    CHECK(res2.sup >= res2.ess_sup_d - res2.kappa - 1e-12);
    CHECK(res2.sup > 0.0);
}

TEST_CASE("h-scan requires a negative multiplication spectrum") {
    std::vector<double> a(4, 0.5), b(4, 0.1), c(4, 0.1), d(4, -1.0);
    const auto res = scan_h_function(a, b, c, d, {});
    CHECK_FALSE(res.applicable);
}

TEST_CASE("decoupled discrete spectrum is the union of the two blocks") {
    const KineticsModel m = fitzhugh_model(kBeta, kSigma, kDelta, kRho);
    const Grid g = build_grid(8, 8, 1.0, 1.0);
    StationarySolution flat;
    flat.u = VectorField(g, 1, 0.3);
    flat.v = ScalarField(g, 0.0);
    flat.mask = make_mask(g, MaskSpec::full());
    flat.base = ConstantState{Eigen::VectorXd::Constant(1, 0.3), 0.0};
    flat.gamma = 2.0;
    auto lin = linearize_on_solution(m, flat);
    const double a_val = lin.A0(0, 0), d_val = lin.d0;
    // decouple
    std::fill(lin.B.begin(), lin.B.end(), 0.0);
    std::fill(lin.C.begin(), lin.C.end(), 0.0);
    lin.B0.setZero();
    lin.C0.setZero();
    const auto spec = discrete_linearized_spectrum(lin, 2.0, {.n_report = 4});
    CHECK(spec.method == "dense");
    CHECK(spec.max_re == doctest::Approx(std::max(a_val, d_val)).epsilon(1e-10));
}

TEST_CASE("constant-coefficient spectrum matches the 2x2 mode symbols") {
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
    const auto spec = discrete_linearized_spectrum(lin, gamma, {.n_report = 6});

    // mode-by-mode 2x2 symbol oracle through the cosine diagonalization
    const auto mu = discrete_laplacian_eigenvalues(g);
    double best = -1e300;
    for (double mode : mu) {
        const double a = lin.A0(0, 0), b = lin.B0(0), c = lin.C0(0);
        const double d = lin.d0 - gamma * mode;
        const double tr = a + d, det = a * d - b * c, disc = tr * tr - 4 * det;
        best = std::max(best, disc >= 0 ? 0.5 * (tr + std::sqrt(disc)) : 0.5 * tr);
    }
    CHECK(spec.max_re == doctest::Approx(best).epsilon(1e-8));
}

TEST_CASE("piecewise-constant multiplication block: max Re equals the cell-wise bound") {
    const KineticsModel m = fitzhugh_model(kBeta, kSigma, kDelta, kRho);
    const Grid g = build_grid(12, 12, 1.0, 1.0);
    const SubdomainMask mask = make_mask(g, MaskSpec::rectangle(0.0, 0.0, 0.4, 0.4));
    StationarySolution flat;
    flat.u = VectorField(g, 1, 0.0);
    flat.v = ScalarField(g, 0.0);
    flat.mask = mask;
    flat.base = ConstantState{Eigen::VectorXd::Zero(1), 0.0};
    flat.gamma = 1.0;
    auto lin = linearize_on_solution(m, flat);
    std::fill(lin.B.begin(), lin.B.end(), 0.0);
    std::fill(lin.C.begin(), lin.C.end(), 0.0);
    lin.B0.setZero();
    lin.C0.setZero();
    for (int c = 0; c < g.cell_count(); ++c) {
        lin.A[c] = mask.label(c) == 2 ? -0.5 : -1.0;
        lin.d[c] = -2.0;  // v-block stays to the left of the A-range
    }
    const auto spec = discrete_linearized_spectrum(lin, 1.0, {.n_report = 3});
    CHECK(spec.max_re == doctest::Approx(-0.5).epsilon(1e-8));
}

TEST_CASE("k3-branch construction has positive discrete spectral bound") {
    const KineticsModel m = fitzhugh_model(kBeta, kSigma, kDelta, kRho);
    const auto sol = canonical_solution(m, 16, 3);
    const auto lin = linearize_on_solution(m, sol);
    const auto spec = discrete_linearized_spectrum(lin, kGamma, {.n_report = 3});
    CHECK(spec.max_re > 0.0);
}

TEST_CASE("subspace fallback approximates the dense rightmost eigenvalue") {
    const KineticsModel m = fitzhugh_model(kBeta, kSigma, kDelta, kRho);
    const auto sol = canonical_solution(m, 16);
    const auto lin = linearize_on_solution(m, sol);
    const auto dense = discrete_linearized_spectrum(lin, kGamma, {.n_report = 3});
    SpectrumOptions iter_opts;
    iter_opts.n_report = 3;
    iter_opts.dense_cap = 4;  // force the iterative route
    const auto iter = discrete_linearized_spectrum(lin, kGamma, iter_opts);
    CHECK(iter.method == "subspace");
    CHECK(iter.max_re == doctest::Approx(dense.max_re).epsilon(5e-3));

    SpectrumOptions no_fallback = iter_opts;
    no_fallback.allow_iterative = false;
    CHECK_THROWS_AS(discrete_linearized_spectrum(lin, kGamma, no_fallback), SizeError);
}

TEST_CASE("full analysis classifies the canonical and k3 constructions") {
    const KineticsModel m = fitzhugh_model(kBeta, kSigma, kDelta, kRho);
    const auto stable = canonical_solution(m, 32);
    const auto rep = analyze_stability(m, stable,
                                       {fitzhugh_branch(m, 1), fitzhugh_branch(m, 2)}, {});
    CHECK(rep.classification == "stable-certified-conditions");
    CHECK(rep.resonance_condition.pass);
    CHECK(rep.h_scan.sup < 0);
    // the discrete spectrum corroborates the scalar certificate
    REQUIRE(rep.spectrum.has_value());
    CHECK(rep.spectrum->max_re < 0.0);
    CHECK(rep.to_json().find("classification") != std::string::npos);

    const auto unstable = canonical_solution(m, 16, 3);
    const auto rep3 = analyze_stability(m, unstable,
                                        {fitzhugh_branch(m, 1), fitzhugh_branch(m, 3)}, {});
    CHECK(rep3.classification == "unstable-by-ODE-spectrum");
    REQUIRE(rep3.spectrum.has_value());
    CHECK(rep3.spectrum->max_re > 0.0);
}
