#include "rdo/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numbers>

#include <json.hpp>

#include "rdo/errors.hpp"
#include "rdo/field_io.hpp"
#include "rdo/kernels.hpp"

namespace rdo {

double cfl_max_dt(const Grid& g, double gamma) {
    if (!(gamma > 0)) throw std::invalid_argument("cfl_max_dt: gamma must be positive");
    const double ihh = 1.0 / (g.hx * g.hx) + (g.ny > 1 ? 1.0 / (g.hy * g.hy) : 0.0);
    return 0.45 / (gamma * ihh);
}

namespace {

struct StepBuffers {
    ScalarField lap;
    Eigen::VectorXd uc, fu;
};

// generic per-cell path for models without the fused kernel
kernels::FitzhughStepResult generic_euler_step(const KineticsModel& model, const Grid& g,
                                               double gamma, double dt, const VectorField& u,
                                               const ScalarField& v, VectorField& un,
                                               ScalarField& vn, const VectorField* ref_u,
                                               const ScalarField* ref_v, StepBuffers& buf) {
    const int nc = g.cell_count(), n = model.n;
    kernels::laplacian(g, v.data(), buf.lap.data());
    for (int c = 0; c < nc; ++c) {
        for (int comp = 0; comp < n; ++comp) buf.uc(comp) = u.at(comp, c);
        buf.fu = model.f(buf.uc, v[c]);
        for (int comp = 0; comp < n; ++comp) un.at(comp, c) = u.at(comp, c) + dt * buf.fu(comp);
        vn[c] = v[c] + dt * (gamma * buf.lap[c] + model.g(buf.uc, v[c]));
    }
    kernels::FitzhughStepResult r;
    r.du_max = ref_u ? sup_norm_diff(un, *ref_u) : sup_norm(un);
    r.dv_max = ref_v ? sup_norm_diff(vn, *ref_v) : sup_norm(vn);
    r.finite = r.du_max < kernels::blow_up_threshold && r.dv_max < kernels::blow_up_threshold;
    return r;
}

std::pair<int, int> find_bad_cell(const Grid& g, const VectorField& u, const ScalarField& v) {
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int c = g.index(i, j);
            for (int comp = 0; comp < u.components(); ++comp) {
                const double x = u.at(comp, c);
                if (!std::isfinite(x) || std::abs(x) > kernels::blow_up_threshold) return {i, j};
            }
            if (!std::isfinite(v[c]) || std::abs(v[c]) > kernels::blow_up_threshold) return {i, j};
        }
    return {-1, -1};
}

}  // namespace

SimulationState step_euler(const KineticsModel& model, double gamma, const SimulationState& s,
                           double dt, bool allow_cfl_override) {
    const Grid& g = s.v.grid();
    if (!(dt > 0)) throw std::invalid_argument("step_euler: dt must be positive");
    if (!allow_cfl_override && dt > cfl_max_dt(g, gamma) * (1.0 + 1e-12))
        throw std::invalid_argument("step_euler: dt exceeds the CFL bound (override to force)");
    SimulationState out{s.t + dt, VectorField(g, model.n), ScalarField(g)};
    kernels::FitzhughStepResult r;
    if (model.fitzhugh && model.n == 1) {
        const auto& p = *model.fitzhugh;
        r = kernels::fitzhugh_euler_step(g, p.beta, p.sigma, p.delta, p.rho, gamma, dt,
                                         s.u.component(0), s.v.data(), out.u.component(0),
                                         out.v.data(), nullptr, nullptr);
    } else {
        StepBuffers buf{ScalarField(g), Eigen::VectorXd(model.n), Eigen::VectorXd(model.n)};
        r = generic_euler_step(model, g, gamma, dt, s.u, s.v, out.u, out.v, nullptr, nullptr, buf);
    }
    if (!r.finite) {
        auto [i, j] = find_bad_cell(g, out.u, out.v);
        throw BlowUpError(out.t, i, j, nullptr);
    }
    return out;
}

SimulationTrace simulate(const KineticsModel& model, double gamma, SimulationState initial,
                         const SimulateOptions& opts, const StationarySolution* reference) {
    const Grid g = initial.v.grid();
    if (!all_finite(initial.u) || !all_finite(initial.v))
        throw std::invalid_argument("simulate: initial state must be finite");
    const double dt_max = cfl_max_dt(g, gamma);
    const double dt = opts.dt > 0 ? opts.dt : dt_max;
    if (!opts.allow_cfl_override && dt > dt_max * (1.0 + 1e-12))
        throw std::invalid_argument("simulate: dt exceeds the CFL bound (override to force)");
    if (!(opts.t_end > 0)) throw std::invalid_argument("simulate: t_end must be positive");

    const long steps = std::lround(std::ceil(opts.t_end / dt - 1e-9));
    auto trace = std::make_shared<SimulationTrace>();
    trace->dt = dt;
    trace->t_end = opts.t_end;
    trace->has_reference = reference != nullptr;
    if (reference)
        trace->floor_hint =
            10.0 * (reference->diag.f_res_inf + reference->diag.g_res_inf) * opts.t_end;

    if (reference) {
        const size_t slots = static_cast<size_t>(steps / opts.norm_stride) + 2;
        trace->times.reserve(slots);
        trace->deviation.reserve(slots);
        trace->du_inf.reserve(slots);
        trace->dv_inf.reserve(slots);
    }
    const double* ref_u = reference ? reference->u.component(0) : nullptr;
    const double* ref_v = reference ? reference->v.data() : nullptr;
    const bool fused = model.fitzhugh && model.n == 1;
    StepBuffers buf;
    if (!fused) buf = StepBuffers{ScalarField(g), Eigen::VectorXd(model.n), Eigen::VectorXd(model.n)};

    auto record = [&](double t, double du, double dv) {
        trace->times.push_back(t);
        trace->du_inf.push_back(du);
        trace->dv_inf.push_back(dv);
        trace->deviation.push_back(du + dv);
    };
    if (reference) {
        record(initial.t, sup_norm_diff(initial.u, reference->u),
               sup_norm_diff(initial.v, reference->v));
    }
    trace->snapshot_times.push_back(initial.t);
    trace->snapshots.push_back(initial);

    VectorField u = std::move(initial.u), un(g, model.n);
    ScalarField v = std::move(initial.v), vn(g);
    double t = initial.t;
    for (long s = 1; s <= steps; ++s) {
        kernels::FitzhughStepResult r;
        if (fused) {
            const auto& p = *model.fitzhugh;
            r = kernels::fitzhugh_euler_step(g, p.beta, p.sigma, p.delta, p.rho, gamma, dt,
                                             u.component(0), v.data(), un.component(0), vn.data(),
                                             ref_u, ref_v);
        } else {
            r = generic_euler_step(model, g, gamma, dt, u, v, un, vn,
                                   reference ? &reference->u : nullptr,
                                   reference ? &reference->v : nullptr, buf);
        }
        std::swap(u, un);
        std::swap(v, vn);
        t = initial.t + s * dt;
        if (!r.finite) {
            auto [i, j] = find_bad_cell(g, u, v);
            trace->snapshot_times.push_back(t);
            trace->snapshots.push_back({t, u, v});
            throw BlowUpError(t, i, j, trace);
        }
        if (reference && s % opts.norm_stride == 0) record(t, r.du_max, r.dv_max);
        if (opts.snapshot_stride > 0 && s % opts.snapshot_stride == 0 && s != steps) {
            trace->snapshot_times.push_back(t);
            trace->snapshots.push_back({t, u, v});
        }
    }
    trace->snapshot_times.push_back(t);
    trace->snapshots.push_back({t, std::move(u), std::move(v)});
    return std::move(*trace);
}

SimulationState perturb(const StationarySolution& sol, double amplitude, PerturbMode mode,
                        std::uint64_t seed, int mode_k, int mode_m) {
    if (amplitude < 0) throw std::invalid_argument("perturb: amplitude must be >= 0");
    const Grid& g = sol.v.grid();
    SimulationState s{0.0, sol.u, sol.v};
    if (amplitude == 0) return s;
    const int nc = g.cell_count();
    switch (mode) {
        case PerturbMode::uniform_shift: {
            for (int c = 0; c < nc; ++c) {
                const double shift = sol.mask.label(c) == 1 ? -amplitude : amplitude;
                for (int comp = 0; comp < s.u.components(); ++comp) s.u.at(comp, c) += shift;
                s.v[c] += shift;
            }
            break;
        }
        case PerturbMode::random_noise: {
            // splitmix64 stream, mapped to [-a, a]
            std::uint64_t state = seed;
            auto next = [&state]() {
                std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
                z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
                z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
                z ^= z >> 31;
                return 2.0 * (static_cast<double>(z >> 11) * 0x1.0p-53) - 1.0;
            };
            for (int comp = 0; comp < s.u.components(); ++comp)
                for (int c = 0; c < nc; ++c) s.u.at(comp, c) += amplitude * next();
            for (int c = 0; c < nc; ++c) s.v[c] += amplitude * next();
            break;
        }
        case PerturbMode::eigenmode: {
            ScalarField mode_field(g);
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i)
                    mode_field.at(i, j) =
                        std::cos(std::numbers::pi * mode_k * g.x_center(i) / g.lx) *
                        std::cos(std::numbers::pi * mode_m * g.y_center(j) / g.ly);
            const double peak = sup_norm(mode_field);
            if (peak == 0) throw std::invalid_argument("perturb: degenerate eigenmode");
            for (int c = 0; c < nc; ++c) {
                const double p = amplitude * mode_field[c] / peak;
                for (int comp = 0; comp < s.u.components(); ++comp) s.u.at(comp, c) += p;
                s.v[c] += p;
            }
            break;
        }
    }
    return s;
}

DecayFit fit_decay_rate(const SimulationTrace& trace, double t_lo, double t_hi) {
    const double floor = std::max(trace.floor_hint, 1e-300);
    std::vector<double> ts, ys;
    for (size_t i = 0; i < trace.times.size(); ++i) {
        const double t = trace.times[i], D = trace.deviation[i];
        if (t < t_lo || t > t_hi) continue;
        if (!(D > floor)) continue;  // round-off floor: auto-truncate
        ts.push_back(t);
        ys.push_back(std::log(D));
    }
    if (ts.size() < 10)
        throw InsufficientDataError("fit_decay_rate: fewer than 10 usable samples in window");
    // one-pass least squares in double on centered data
    const long n = static_cast<long>(ts.size());
    double tm = 0, ym = 0;
    for (long i = 0; i < n; ++i) {
        tm += ts[i];
        ym += ys[i];
    }
    tm /= n;
    ym /= n;
    double stt = 0, the = 0, syy = 0;
    for (long i = 0; i < n; ++i) {
        const double dtc = ts[i] - tm, dyc = ys[i] - ym;
        stt += dtc * dtc;
        the += dtc * dyc;
        syy += dyc * dyc;
    }
    if (stt == 0) throw InsufficientDataError("fit_decay_rate: degenerate time window");
    const double slope = the / stt;
    DecayFit fit;
    fit.k_est = -slope;
    fit.r_squared = syy == 0 ? 1.0 : (the * the) / (stt * syy);
    fit.samples = n;
    fit.t_lo = t_lo;
    fit.t_hi = t_hi;
    return fit;
}

void write_norms_csv(const std::filesystem::path& path, const SimulationTrace& trace) {
    std::FILE* fp = std::fopen(path.string().c_str(), "w");
    if (!fp) throw std::runtime_error("cannot open " + path.string() + " for writing");
    std::fprintf(fp, "t,D,du_inf,dv_inf\n");
    for (size_t i = 0; i < trace.times.size(); ++i)
        std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g\n", trace.times[i], trace.deviation[i],
                     trace.du_inf[i], trace.dv_inf[i]);
    std::fclose(fp);
}

void write_snapshots(const std::filesystem::path& dir, const SimulationTrace& trace) {
    std::filesystem::create_directories(dir);
    nlohmann::json index = nlohmann::json::array();
    for (size_t s = 0; s < trace.snapshots.size(); ++s) {
        char name_u[64], name_v[64];
        std::snprintf(name_u, sizeof name_u, "snap_%04zu_u.csv", s);
        std::snprintf(name_v, sizeof name_v, "snap_%04zu_v.csv", s);
        write_field_csv(dir / name_u, trace.snapshots[s].u);
        write_field_csv(dir / name_v, trace.snapshots[s].v);
        index.push_back({{"t", trace.snapshot_times[s]}, {"u", name_u}, {"v", name_v}});
    }
    std::ofstream out(dir / "snapshots.json");
    out << index.dump(2) << "\n";
}

}  // namespace rdo
