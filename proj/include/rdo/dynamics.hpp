#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "rdo/field.hpp"
#include "rdo/grid.hpp"
#include "rdo/kinetics.hpp"
#include "rdo/stationary.hpp"

namespace rdo {

struct SimulationState {
    double t = 0;
    VectorField u;
    ScalarField v;
};

/// Recorded norms and snapshots of one time integration. When a reference
/// stationary solution is supplied, D(t) = ||u-U||_inf + ||v-V||_inf is
/// recorded every norm_stride steps (default: every step).
struct SimulationTrace {
    std::vector<double> times;
    std::vector<double> deviation;  // D(t)
    std::vector<double> du_inf;
    std::vector<double> dv_inf;
    std::vector<double> snapshot_times;
    std::vector<SimulationState> snapshots;
    bool has_reference = false;
    double dt = 0;
    double t_end = 0;
    /// Noise level of D when starting exactly on the reference; samples at or
    /// below this are dropped by the decay fit (round-off floor).
    double floor_hint = 0;
};

/// 0.45 / (gamma * (1/hx^2 + 1/hy^2)); the y-term drops for 1-D grids.
double cfl_max_dt(const Grid& g, double gamma);

/// One explicit Euler step; dt above the CFL bound throws unless overridden.
SimulationState step_euler(const KineticsModel& model, double gamma, const SimulationState& s,
                           double dt, bool allow_cfl_override = false);

struct SimulateOptions {
    double dt = 0;  // 0: use cfl_max_dt
    double t_end = 1.0;
    long snapshot_stride = 0;  // 0: no intermediate snapshots (initial/final always kept)
    long norm_stride = 1;
    bool allow_cfl_override = false;
};

SimulationTrace simulate(const KineticsModel& model, double gamma, SimulationState initial,
                         const SimulateOptions& opts,
                         const StationarySolution* reference = nullptr);

enum class PerturbMode { uniform_shift, random_noise, eigenmode };

/// Deterministic perturbation of a stationary solution. uniform_shift applies
/// -a on label 1 and +a on labels >= 2 to both fields;
/// eigenmode adds a cosine mode scaled to exact sup-norm a; random_noise is
/// seeded uniform noise in [-a, a].
SimulationState perturb(const StationarySolution& sol, double amplitude, PerturbMode mode,
                        std::uint64_t seed = 0, int mode_k = 1, int mode_m = 0);

struct DecayFit {
    double k_est = 0;     // positive for decay
    double r_squared = 0;
    long samples = 0;
    double t_lo = 0, t_hi = 0;
};

/// Least-squares slope of log D(t) over [t_lo, t_hi]; k_est = -slope.
/// Samples at the round-off floor are dropped; fewer than 10 left throws
/// InsufficientDataError.
DecayFit fit_decay_rate(const SimulationTrace& trace, double t_lo, double t_hi);

/// Norms CSV: "t,D,du_inf,dv_inf" rows for every recorded step.
void write_norms_csv(const std::filesystem::path& path, const SimulationTrace& trace);

/// Snapshots as field CSVs indexed by a JSON manifest.
void write_snapshots(const std::filesystem::path& dir, const SimulationTrace& trace);

}  // namespace rdo
