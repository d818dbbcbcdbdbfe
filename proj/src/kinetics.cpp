#include "rdo/kinetics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rdo/cubic.hpp"
#include "rdo/errors.hpp"

namespace rdo {

KineticsModel fitzhugh_model(double beta, double sigma, double delta, double rho) {
    if (!(sigma > 0) || !(delta > 0) || !(rho >= 0))
        throw std::invalid_argument("fitzhugh_model: sigma, delta must be positive, rho >= 0");
    if (!(beta > 0) || !(beta < 1))
        throw std::invalid_argument("fitzhugh_model: beta must lie in (0,1)");
    KineticsModel m;
    m.n = 1;
    m.name = "fitzhugh";
    m.fitzhugh = FitzhughParams{beta, sigma, delta, rho};
    m.f = [beta](const Eigen::VectorXd& u, double v) {
        Eigen::VectorXd out(1);
        out(0) = u(0) * (1.0 - u(0)) * (u(0) - beta) - v;
        return out;
    };
    m.g = [sigma, delta, rho](const Eigen::VectorXd& u, double v) {
        return sigma * u(0) - delta * v - rho;
    };
    m.f_u = [beta](const Eigen::VectorXd& u, double) {
        Eigen::MatrixXd out(1, 1);
        out(0, 0) = -3.0 * u(0) * u(0) + 2.0 * (1.0 + beta) * u(0) - beta;
        return out;
    };
    m.f_v = [](const Eigen::VectorXd&, double) {
        Eigen::VectorXd out(1);
        out(0) = -1.0;
        return out;
    };
    m.g_u = [sigma](const Eigen::VectorXd&, double) {
        Eigen::RowVectorXd out(1);
        out(0) = sigma;
        return out;
    };
    m.g_v = [delta](const Eigen::VectorXd&, double) { return -delta; };
    m.branch_solver = [beta](double v) {
        // u(1-u)(u-beta) - v = 0  <=>  u^3 - (1+beta)u^2 + beta u + v = 0
        auto roots = real_cubic_roots(-(1.0 + beta), beta, v);
        std::vector<BranchPoint> out;
        for (const auto& r : roots) {
            Eigen::VectorXd u(1);
            u(0) = r.value;
            out.push_back({u, r.degenerate});
        }
        return out;
    };
    return m;
}

std::vector<BranchPoint> branches_at(const KineticsModel& model, double v) {
    if (!model.branch_solver)
        throw std::invalid_argument("branches_at: model has no branch solver registered");
    return model.branch_solver(v);
}

namespace {

// damped Newton on f(., v) = 0; returns true on convergence
bool newton_root(const KineticsModel& model, double v, Eigen::VectorXd& u, int max_iter = 60) {
    Eigen::VectorXd r = model.f(u, v);
    double rn = r.lpNorm<Eigen::Infinity>();
    for (int it = 0; it < max_iter; ++it) {
        const double scale = 1e-12 * (1.0 + u.lpNorm<Eigen::Infinity>() + std::abs(v));
        if (rn <= 0.5 * scale) return true;
        const Eigen::MatrixXd J = model.f_u(u, v);
        const Eigen::VectorXd step = J.fullPivLu().solve(-r);
        if (!step.allFinite()) return false;
        double lambda = 1.0;
        bool moved = false;
        for (int bt = 0; bt < 30; ++bt) {
            Eigen::VectorXd ut = u + lambda * step;
            Eigen::VectorXd rt = model.f(ut, v);
            const double rtn = rt.lpNorm<Eigen::Infinity>();
            if (rtn < rn) {
                u = std::move(ut);
                r = std::move(rt);
                rn = rtn;
                moved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!moved) return false;
    }
    return rn <= 1e-12 * (1.0 + u.lpNorm<Eigen::Infinity>() + std::abs(v));
}

}  // namespace

std::vector<BranchPoint> branches_at(const KineticsModel& model, double v,
                                     const std::vector<Eigen::VectorXd>& seeds,
                                     std::vector<int>* failed_seeds) {
    std::vector<BranchPoint> out;
    for (size_t s = 0; s < seeds.size(); ++s) {
        Eigen::VectorXd u = seeds[s];
        if (!newton_root(model, v, u)) {
            if (failed_seeds) failed_seeds->push_back(static_cast<int>(s));
            continue;
        }
        bool duplicate = false;
        for (const auto& p : out)
            if ((p.u - u).lpNorm<Eigen::Infinity>() <= 1e-8 * (1.0 + u.lpNorm<Eigen::Infinity>()))
                duplicate = true;
        if (!duplicate) out.push_back({u, false});
    }
    std::sort(out.begin(), out.end(),
              [](const BranchPoint& a, const BranchPoint& b) { return a.u(0) < b.u(0); });
    return out;
}

BranchFunction make_newton_branch(const KineticsModel& model, int id,
                                  const Eigen::VectorXd& u_at_anchor, double v_anchor,
                                  double v_lo, double v_hi) {
    if (v_anchor < v_lo || v_anchor > v_hi)
        throw std::invalid_argument("make_newton_branch: anchor outside the interval");
    {
        Eigen::VectorXd probe = u_at_anchor;
        if (!newton_root(model, v_anchor, probe))
            throw std::invalid_argument("make_newton_branch: seed does not converge at anchor");
    }
    BranchFunction b;
    b.id = id;
    b.v_lo = v_lo;
    b.v_hi = v_hi;
    const double step_cap = std::max(1e-12, (v_hi - v_lo) / 32.0);
    b.eval = [model, u_at_anchor, v_anchor, step_cap](double v) {
        Eigen::VectorXd u = u_at_anchor;
        double w = v_anchor;
        // bounded continuation steps keep Newton inside the branch basin
        while (w != v) {
            const double next = std::abs(v - w) <= step_cap ? v
                                : w + (v > w ? step_cap : -step_cap);
            w = next;
            if (!newton_root(model, w, u))
                throw std::runtime_error("newton branch: continuation lost the root at v=" +
                                         std::to_string(w));
        }
        return u;
    };
    return b;
}

void validate_model(const KineticsModel& model, int samples, std::uint64_t seed, double u_range,
                    double v_range) {
    std::uint64_t state = seed;
    auto uniform = [&state]() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return 2.0 * (static_cast<double>(z >> 11) * 0x1.0p-53) - 1.0;
    };
    const int n = model.n;
    for (int trial = 0; trial < samples; ++trial) {
        Eigen::VectorXd u(n);
        for (int c = 0; c < n; ++c) u(c) = u_range * uniform();
        const double v = v_range * uniform();

        auto check = [&](double analytic, double numeric, const std::string& what) {
            const double tol = 1e-5 * (1.0 + std::abs(analytic) + std::abs(numeric));
            if (!(std::abs(analytic - numeric) <= tol))
                throw NumericError("validate_model: " + what + " disagrees with differences (" +
                                   std::to_string(analytic) + " vs " + std::to_string(numeric) +
                                   ")");
        };
        const Eigen::MatrixXd A = model.f_u(u, v);
        for (int c = 0; c < n; ++c) {
            const double h = 1e-6 * (1.0 + std::abs(u(c)));
            Eigen::VectorXd up = u, um = u;
            up(c) += h;
            um(c) -= h;
            const Eigen::VectorXd col = (model.f(up, v) - model.f(um, v)) / (2.0 * h);
            for (int r = 0; r < n; ++r)
                check(A(r, c), col(r), "f_u(" + std::to_string(r) + "," + std::to_string(c) + ")");
            check(model.g_u(u, v)(c), (model.g(up, v) - model.g(um, v)) / (2.0 * h),
                  "g_u(" + std::to_string(c) + ")");
        }
        const double hv = 1e-6 * (1.0 + std::abs(v));
        const Eigen::VectorXd fv = (model.f(u, v + hv) - model.f(u, v - hv)) / (2.0 * hv);
        for (int r = 0; r < n; ++r) check(model.f_v(u, v)(r), fv(r), "f_v(" + std::to_string(r) + ")");
        check(model.g_v(u, v), (model.g(u, v + hv) - model.g(u, v - hv)) / (2.0 * hv), "g_v");
    }
}

std::vector<ConstantState> constant_steady_states(const KineticsModel& model,
                                                  const SearchBox& box, int resolution) {
    if (resolution < 16) throw std::invalid_argument("constant_steady_states: resolution < 16");
    if (!std::isfinite(box.u_lo) || !std::isfinite(box.u_hi) || !std::isfinite(box.v_lo) ||
        !std::isfinite(box.v_hi))
        throw std::invalid_argument("constant_steady_states: box must be finite");
    if (model.n != 1)
        throw std::invalid_argument("constant_steady_states: only n = 1 models supported");

    // substitute the g-nullcline v(u) into f and scan u for sign changes
    auto v_of_u = [&](double u) {
        if (model.fitzhugh) {
            const auto& p = *model.fitzhugh;
            return (p.sigma * u - p.rho) / p.delta;
        }
        throw std::invalid_argument("constant_steady_states: general g-nullcline not available");
    };
    auto fv = [&](double u) {
        Eigen::VectorXd uu(1);
        uu(0) = u;
        return model.f(uu, v_of_u(u))(0);
    };

    std::vector<double> roots;
    double prev_u = box.u_lo, prev_f = fv(prev_u);
    for (int s = 1; s <= resolution; ++s) {
        const double u = box.u_lo + (box.u_hi - box.u_lo) * s / resolution;
        const double cur = fv(u);
        if (prev_f == 0.0) roots.push_back(prev_u);
        if ((prev_f < 0.0) != (cur < 0.0)) {
            double lo = prev_u, hi = u, flo = prev_f;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi), fm = fv(mid);
                if ((flo < 0.0) == (fm < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            double u_root = 0.5 * (lo + hi);
            for (int it = 0; it < 3; ++it) {  // Newton polish on the substituted function
                const double h = 1e-7 * (1.0 + std::abs(u_root));
                const double der = (fv(u_root + h) - fv(u_root - h)) / (2.0 * h);
                if (der != 0.0) u_root -= fv(u_root) / der;
            }
            roots.push_back(u_root);
        }
        prev_u = u;
        prev_f = cur;
    }

    std::sort(roots.begin(), roots.end());
    std::vector<ConstantState> out;
    for (double u : roots) {
        const double v = v_of_u(u);
        if (v < box.v_lo || v > box.v_hi) continue;
        if (!out.empty() && std::abs(u - out.back().u_bar(0)) < 1e-8) continue;
        Eigen::VectorXd uu(1);
        uu(0) = u;
        out.push_back({uu, v});
    }
    return out;
}

Linearization linearization_at(const KineticsModel& model, const Eigen::VectorXd& u, double v) {
    if (!u.allFinite() || !std::isfinite(v))
        throw std::invalid_argument("linearization_at: arguments must be finite");
    return Linearization{model.f_u(u, v), model.f_v(u, v), model.g_u(u, v), model.g_v(u, v)};
}

FitzhughBranchInfo fitzhugh_branch_info(const FitzhughParams& p) {
    // critical points of phi(u) = u(1-u)(u-beta): phi'(u) = -3u^2 + 2(1+beta)u - beta
    const double s = std::sqrt(1.0 - p.beta + p.beta * p.beta);
    FitzhughBranchInfo info;
    info.u_minus = ((1.0 + p.beta) - s) / 3.0;
    info.u_plus = ((1.0 + p.beta) + s) / 3.0;
    auto phi = [&](double u) { return u * (1.0 - u) * (u - p.beta); };
    info.v_lo = phi(info.u_minus);
    info.v_hi = phi(info.u_plus);
    return info;
}

BranchFunction fitzhugh_branch(const KineticsModel& model, int id, double interval_margin) {
    if (!model.fitzhugh) throw std::invalid_argument("fitzhugh_branch: not a FitzHugh model");
    if (id < 1 || id > 3) throw std::invalid_argument("fitzhugh_branch: id must be 1, 2 or 3");
    const auto info = fitzhugh_branch_info(*model.fitzhugh);
    const double margin = interval_margin * (info.v_hi - info.v_lo);
    BranchFunction b;
    b.id = id;
    b.v_lo = info.v_lo + margin;
    b.v_hi = info.v_hi - margin;
    const double u_minus = info.u_minus, u_plus = info.u_plus;
    auto solver = model.branch_solver;
    b.eval = [solver, id, u_minus, u_plus](double v) {
        const auto roots = solver(v);
        for (const auto& r : roots) {
            const double u = r.u(0);
            const bool match = (id == 1 && u < u_minus) || (id == 3 && u >= u_minus && u <= u_plus) ||
                               (id == 2 && u > u_plus);
            if (match) return r.u;
        }
        throw std::runtime_error("fitzhugh_branch: branch " + std::to_string(id) +
                                 " has no root at v=" + std::to_string(v));
    };
    return b;
}

BranchPair make_branch_pair(const KineticsModel& model, int index_1, int index_2) {
    const BranchFunction b1 = fitzhugh_branch(model, index_1);
    const BranchFunction b2 = fitzhugh_branch(model, index_2);
    BranchPair pair;
    pair.index_1 = index_1;
    pair.index_2 = index_2;
    pair.v_lo = std::max(b1.v_lo, b2.v_lo);
    pair.v_hi = std::min(b1.v_hi, b2.v_hi);
    return pair;
}

void validate_branch_pair(const KineticsModel& model, const BranchPair& pair, int samples) {
    if (!(pair.v_lo < pair.v_hi))
        throw std::invalid_argument("branch pair: empty validity interval");
    const BranchFunction b1 = fitzhugh_branch(model, pair.index_1);
    const BranchFunction b2 = fitzhugh_branch(model, pair.index_2);
    Eigen::VectorXd prev1, prev2;
    const double span = pair.v_hi - pair.v_lo;
    for (int s = 0; s <= samples; ++s) {
        const double v = pair.v_lo + span * s / samples;
        const Eigen::VectorXd u1 = b1.eval(v), u2 = b2.eval(v);
        if (!branch_residual_ok(model, u1, v) || !branch_residual_ok(model, u2, v))
            throw NumericError("branch pair: residual violation at v=" + std::to_string(v));
        if (pair.index_1 != pair.index_2 &&
            (u1 - u2).lpNorm<Eigen::Infinity>() <= 1e-12 * (1.0 + u1.lpNorm<Eigen::Infinity>()))
            throw NumericError("branch pair: branches collide at v=" + std::to_string(v));
        // no root-count change along the interval: consecutive samples stay close
        if (s > 0) {
            const double cap = 10.0 * span / samples + 1e-6;
            if ((u1 - prev1).lpNorm<Eigen::Infinity>() > cap * 50 ||
                (u2 - prev2).lpNorm<Eigen::Infinity>() > cap * 50)
                throw NumericError("branch pair: branch jumps at v=" + std::to_string(v));
        }
        prev1 = u1;
        prev2 = u2;
    }
}

bool branch_residual_ok(const KineticsModel& model, const Eigen::VectorXd& u, double v) {
    const double res = model.f(u, v).lpNorm<Eigen::Infinity>();
    return res <= 1e-12 * (1.0 + u.lpNorm<Eigen::Infinity>() + std::abs(v));
}

}  // namespace rdo
