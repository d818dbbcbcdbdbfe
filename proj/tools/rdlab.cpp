// rdlab: config-driven experiments around discontinuous stationary solutions
// of reaction-diffusion-ODE systems. Subcommands: nullclines, construct,
// simulate, stability, eigs. Exit codes: 0 ok, 2 config error,
// 3 convergence/blow-up failure, 4 numeric error.

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "rdo/config.hpp"
#include "rdo/dynamics.hpp"
#include "rdo/errors.hpp"
#include "rdo/field_io.hpp"
#include "rdo/kinetics.hpp"
#include "rdo/stability.hpp"
#include "rdo/stationary.hpp"

namespace fs = std::filesystem;
using namespace rdo;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;   // overrides [output].dir when set
    std::string artifacts; // stability/eigs input directory
    int threads = 0;
    std::optional<std::uint64_t> seed;
    bool allow_cfl_override = false;
};

ExperimentConfig resolve_config(const CommonArgs& args, const std::string& command) {
    ExperimentConfig cfg = load_config(args.config_path);
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    if (args.seed) {
        cfg.perturb_seed = *args.seed;
        if (cfg.mask.shape == MaskSpec::Shape::random) cfg.mask.seed = *args.seed;
    }
    if (args.allow_cfl_override) cfg.allow_cfl_override = true;
    (void)command;
    return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (text.empty() || text.back() != '\n') out << '\n';
}

void write_manifest(const ExperimentConfig& cfg, const std::string& command,
                    std::optional<std::uint64_t> seed_override) {
    write_text(fs::path(cfg.out_dir) / "manifest.json",
               make_manifest(cfg, command, omp_get_max_threads(), seed_override));
}

StabilityOptions stability_options(const ExperimentConfig& cfg) {
    StabilityOptions opts;
    opts.h_scan.kappa = cfg.kappa;
    opts.h_scan.alpha_samples = cfg.alpha_samples;
    opts.h_scan.beta_samples = cfg.beta_samples;
    opts.spectrum.n_report = cfg.n_report;
    opts.spectrum.dense_cap = cfg.dense_cap;
    opts.run_spectrum = cfg.run_discrete_spectrum;
    opts.deviation_exponent = cfg.deviation_exponent;
    return opts;
}

ConstantState pick_base_state(const KineticsModel& model, int which_branch) {
    // constant states sorted ascending in u; the construction bases itself on
    // the state lying on the requested branch (left state for branch 1)
    const auto states = constant_steady_states(model, {-2.0, 3.0, -10.0, 10.0}, 8192);
    if (states.empty()) throw NumericError("no constant steady state in the search box");
    const auto info = fitzhugh_branch_info(*model.fitzhugh);
    for (const auto& s : states) {
        const double u = s.u_bar(0);
        const bool match = (which_branch == 1 && u < info.u_minus) ||
                           (which_branch == 3 && u >= info.u_minus && u <= info.u_plus) ||
                           (which_branch == 2 && u > info.u_plus);
        if (match) return s;
    }
    throw NumericError("no constant state lies on branch " + std::to_string(which_branch));
}

StationarySolution run_construction(const ExperimentConfig& cfg, const KineticsModel& model) {
    const Grid grid = cfg.make_grid();
    const SubdomainMask mask = make_mask(grid, cfg.mask);
    if (static_cast<int>(cfg.branches.size()) < mask.label_count())
        throw SchemaError("construction.branches",
                          "mask has " + std::to_string(mask.label_count()) +
                              " labels but only " + std::to_string(cfg.branches.size()) +
                              " branches are assigned");
    const ConstantState base = pick_base_state(model, cfg.branches[0]);
    return multi_branch_construct(model, grid, mask, base, cfg.make_branches(model),
                                  {.gamma = cfg.gamma, .tol = cfg.tol, .max_iter = cfg.max_iter},
                                  cfg.mask);
}

int cmd_nullclines(const ExperimentConfig& cfg) {
    const KineticsModel model = cfg.make_model();
    fs::create_directories(cfg.out_dir);
    const fs::path dir(cfg.out_dir);

    // f-nullcline as v = u(1-u)(u-beta); g-nullcline as v = (sigma u - rho)/delta
    std::FILE* fp = std::fopen((dir / "nullclines.csv").string().c_str(), "w");
    if (!fp) throw std::runtime_error("cannot write nullclines.csv");
    std::fprintf(fp, "u,v,curve_id\n");
    const int samples = 800;
    for (int s = 0; s <= samples; ++s) {
        const double u = -0.5 + 2.0 * s / samples;
        std::fprintf(fp, "%.17g,%.17g,f\n", u, u * (1.0 - u) * (u - cfg.beta));
    }
    for (int s = 0; s <= samples; ++s) {
        const double u = -0.5 + 2.0 * s / samples;
        std::fprintf(fp, "%.17g,%.17g,g\n", u, (cfg.sigma * u - cfg.rho) / cfg.delta);
    }
    std::fclose(fp);

    const auto states = constant_steady_states(model, {-2.0, 3.0, -10.0, 10.0}, 8192);
    fp = std::fopen((dir / "states.csv").string().c_str(), "w");
    if (!fp) throw std::runtime_error("cannot write states.csv");
    std::fprintf(fp, "u,v,f_u\n");
    for (const auto& st : states)
        std::fprintf(fp, "%.17g,%.17g,%.17g\n", st.u_bar(0), st.v_bar,
                     model.f_u(st.u_bar, st.v_bar)(0, 0));
    std::fclose(fp);

    const auto info = fitzhugh_branch_info(*model.fitzhugh);
    nlohmann::json intervals;
    intervals["u_minus"] = info.u_minus;
    intervals["u_plus"] = info.u_plus;
    intervals["v_lo"] = info.v_lo;
    intervals["v_hi"] = info.v_hi;
    intervals["branches"] = {{"1", "left decreasing"}, {"2", "right decreasing"},
                             {"3", "middle increasing"}};
    write_text(dir / "intervals.json", intervals.dump(2));
    std::printf("nullclines: %zu constant states -> %s\n", states.size(), cfg.out_dir.c_str());
    return 0;
}

int cmd_construct(const ExperimentConfig& cfg) {
    const KineticsModel model = cfg.make_model();
    const StationarySolution sol = run_construction(cfg, model);
    save_solution(cfg.out_dir, sol);
    const StabilityReport report =
        analyze_stability(model, sol, cfg.make_branches(model), stability_options(cfg));
    write_text(fs::path(cfg.out_dir) / "stability.json", report.to_json());
    std::printf("%s", report.to_table().c_str());
    std::printf("construct: %d iterations, g-residual %.3e, eps %.3e -> %s\n",
                sol.diag.iterations, sol.diag.g_res_inf, sol.diag.eps_measured,
                cfg.out_dir.c_str());
    return 0;
}

int cmd_simulate(const ExperimentConfig& cfg) {
    const KineticsModel model = cfg.make_model();
    const StationarySolution sol = run_construction(cfg, model);
    save_solution(cfg.out_dir, sol);

    SimulationState init;
    if (cfg.perturb_mode == "middle-state") {
        // below the middle constant state on label 1, above elsewhere; the v
        // shift is a tenth of the u shift so both sides start in the intended
        // basins (the middle branch moves ~1/f_u' faster than v)
        const ConstantState middle = pick_base_state(model, 3);
        const Grid& g = sol.v.grid();
        init = SimulationState{0.0, VectorField(g, model.n), ScalarField(g)};
        for (int c = 0; c < g.cell_count(); ++c) {
            const double sgn = sol.mask.label(c) == 1 ? -1.0 : 1.0;
            init.u.at(0, c) = middle.u_bar(0) + sgn * cfg.amplitude;
            init.v[c] = middle.v_bar + sgn * cfg.amplitude / 10.0;
        }
    } else {
        const PerturbMode mode = cfg.perturb_mode == "uniform" ? PerturbMode::uniform_shift
                                 : cfg.perturb_mode == "random" ? PerturbMode::random_noise
                                                                : PerturbMode::eigenmode;
        init = perturb(sol, cfg.amplitude, mode, cfg.perturb_seed, cfg.mode_k, cfg.mode_m);
    }

    SimulateOptions opts;
    opts.dt = cfg.dt;
    opts.t_end = cfg.t_end;
    opts.snapshot_stride = cfg.snapshot_stride;
    opts.norm_stride = cfg.norm_stride;
    opts.allow_cfl_override = cfg.allow_cfl_override;

    nlohmann::json summary;
    int exit_code = 0;
    SimulationTrace trace;
    try {
        trace = simulate(model, cfg.gamma, std::move(init), opts, &sol);
        summary["blow_up"] = false;
    } catch (const BlowUpError& e) {
        if (!e.partial_trace) throw;
        trace = *e.partial_trace;
        summary["blow_up"] = true;
        summary["blow_up_t"] = e.t;
        summary["blow_up_cell"] = {e.i, e.j};
        exit_code = 3;
    }
    const fs::path dir(cfg.out_dir);
    write_norms_csv(dir / "norms.csv", trace);
    write_snapshots(dir / "snapshots", trace);

    summary["dt"] = trace.dt;
    summary["t_end"] = trace.t_end;
    summary["D_initial"] = trace.deviation.empty() ? 0.0 : trace.deviation.front();
    summary["D_final"] = trace.deviation.empty() ? 0.0 : trace.deviation.back();
    try {
        const DecayFit fit = fit_decay_rate(trace, 0.1 * cfg.t_end, cfg.t_end);
        summary["k_est"] = fit.k_est;
        summary["r_squared"] = fit.r_squared;
        summary["fit_samples"] = fit.samples;
    } catch (const InsufficientDataError& e) {
        summary["k_est"] = nullptr;
        summary["fit_note"] = std::string(e.what()) + " (deviation at the round-off floor)";
    }
    write_text(dir / "summary.json", summary.dump(2));
    std::printf("simulate: D %.3e -> %.3e, artifacts in %s\n",
                summary["D_initial"].get<double>(), summary["D_final"].get<double>(),
                cfg.out_dir.c_str());
    return exit_code;
}

int cmd_stability(const ExperimentConfig& cfg, const std::string& artifacts) {
    const KineticsModel model = cfg.make_model();
    StationarySolution sol = load_solution(artifacts);
    std::vector<BranchFunction> branches;
    for (int id : sol.branch_by_label) branches.push_back(fitzhugh_branch(model, id));
    const StabilityReport report = analyze_stability(model, sol, branches, stability_options(cfg));
    fs::create_directories(cfg.out_dir);
    write_text(fs::path(cfg.out_dir) / "stability.json", report.to_json());
    std::printf("%s", report.to_table().c_str());
    return 0;
}

int cmd_eigs(const ExperimentConfig& cfg, const std::string& artifacts) {
    const KineticsModel model = cfg.make_model();
    StationarySolution sol = load_solution(artifacts);
    const LinearizationData lin = linearize_on_solution(model, sol);
    SpectrumOptions opts;
    opts.n_report = cfg.n_report;
    opts.dense_cap = cfg.dense_cap;
    const SpectrumResult spec = discrete_linearized_spectrum(lin, sol.gamma, opts);
    nlohmann::json j;
    j["method"] = spec.method;
    j["max_re"] = spec.max_re;
    nlohmann::json ev = nlohmann::json::array();
    for (const auto& z : spec.rightmost) ev.push_back({z.real(), z.imag()});
    j["rightmost"] = ev;
    fs::create_directories(cfg.out_dir);
    write_text(fs::path(cfg.out_dir) / "eigs.json", j.dump(2));
    std::printf("eigs (%s): rightmost Re = %.6e\n", spec.method.c_str(), spec.max_re);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reaction-diffusion-ODE stationary-pattern laboratory"};
    app.require_subcommand(1);

    CommonArgs args;
    auto add_common = [&](CLI::App* cmd, bool needs_artifacts = false) {
        cmd->add_option("--config", args.config_path, "experiment config (flat file or manifest.json)")
            ->required();
        cmd->add_option("--out", args.out_dir, "output directory (overrides [output].dir)");
        cmd->add_option("--threads", args.threads, "OpenMP thread count");
        if (needs_artifacts)
            cmd->add_option("--artifacts", args.artifacts, "directory with U.csv/V.csv/solution.json")
                ->required();
    };

    CLI::App* nullclines = app.add_subcommand("nullclines", "sample the nullclines and constant states");
    add_common(nullclines);
    CLI::App* construct = app.add_subcommand("construct", "build a stationary solution and certify it");
    add_common(construct);
    std::uint64_t seed_value = 0;
    CLI::Option* construct_seed =
        construct->add_option("--seed", seed_value, "override config seeds");
    CLI::App* simulate_cmd = app.add_subcommand("simulate", "integrate the system against a reference");
    add_common(simulate_cmd);
    CLI::Option* simulate_seed =
        simulate_cmd->add_option("--seed", seed_value, "override config seeds");
    simulate_cmd->add_flag("--allow-cfl-override", args.allow_cfl_override,
                           "permit dt beyond the CFL bound");
    CLI::App* stability_cmd = app.add_subcommand("stability", "re-run certification on artifacts");
    add_common(stability_cmd, true);
    CLI::App* eigs = app.add_subcommand("eigs", "discrete linearized spectrum of artifacts");
    add_common(eigs, true);

    CLI11_PARSE(app, argc, argv);
    if (construct_seed->count() > 0 || simulate_seed->count() > 0) args.seed = seed_value;
    if (args.threads > 0) omp_set_num_threads(args.threads);

    try {
        const std::string command = app.get_subcommands().front()->get_name();
        const ExperimentConfig cfg = resolve_config(args, command);
        fs::create_directories(cfg.out_dir);
        write_manifest(cfg, command, args.seed);
        if (command == "nullclines") return cmd_nullclines(cfg);
        if (command == "construct") return cmd_construct(cfg);
        if (command == "simulate") return cmd_simulate(cfg);
        if (command == "stability") return cmd_stability(cfg, args.artifacts);
        if (command == "eigs") return cmd_eigs(cfg, args.artifacts);
        return 2;
    } catch (const SchemaError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const NonConvergenceError& e) {
        std::fprintf(stderr, "failure: %s\n  hint: shrink the mask, raise gamma, or raise max_iter\n",
                     e.what());
        return 3;
    } catch (const BranchDomainError& e) {
        std::fprintf(stderr, "failure: %s\n  hint: shrink the mask or move the base state\n",
                     e.what());
        return 3;
    } catch (const BlowUpError& e) {
        std::fprintf(stderr, "failure: %s\n  hint: lower dt or check the CFL bound\n", e.what());
        return 3;
    } catch (const ResonanceError& e) {
        std::fprintf(stderr, "numeric error: %s\n  hint: adjust gamma away from the resonance\n",
                     e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 4;
    }
}
