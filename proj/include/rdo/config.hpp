#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rdo/dynamics.hpp"
#include "rdo/grid.hpp"
#include "rdo/kinetics.hpp"
#include "rdo/mask.hpp"
#include "rdo/stability.hpp"

namespace rdo {

/// Fully validated experiment description. Parsed from the flat sectioned
/// key-value format (see README for the schema) or from a manifest JSON
/// written by a previous run; unknown sections or keys are rejected.
struct ExperimentConfig {
    // [model]
    std::string model_name = "fitzhugh";
    double beta = 0.5, sigma = 0.02, delta = 1.0, rho = 0.01;
    // [grid]
    int nx = 64, ny = 64;
    double lx = 1.0, ly = 1.0;
    // [mask]
    MaskSpec mask;
    // [construction]
    double gamma = 50.0;
    std::vector<int> branches = {1, 2};  // branch id per mask label
    double tol = 1e-10;
    int max_iter = 200;
    // [stability]
    double kappa = 0.01;
    int alpha_samples = 64, beta_samples = 64;
    int n_report = 10;
    int dense_cap = 5000;
    bool run_discrete_spectrum = true;
    int deviation_exponent = 0;  // 0 = spatial dimension
    // [time]
    double dt = 0;  // 0 = cfl_max_dt
    double t_end = 1.0;
    long snapshot_stride = 0;
    long norm_stride = 1;
    bool allow_cfl_override = false;
    // [perturbation]
    std::string perturb_mode = "uniform";  // uniform, random, eigenmode, middle-state
    double amplitude = 0.01;
    std::uint64_t perturb_seed = 0;
    int mode_k = 1, mode_m = 0;
    // [output]
    std::string out_dir = "out";

    KineticsModel make_model() const;
    Grid make_grid() const;
    std::vector<BranchFunction> make_branches(const KineticsModel& model) const;

    /// The resolved flat form, suitable for re-parsing (manifest embedding).
    std::map<std::string, std::map<std::string, std::string>> to_sections() const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// manifest.json payload: resolved config + reproducibility metadata.
std::string make_manifest(const ExperimentConfig& cfg, const std::string& command, int threads,
                          std::optional<std::uint64_t> seed_override);

inline constexpr const char* library_version = "0.1.0";

}  // namespace rdo
