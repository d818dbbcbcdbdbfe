#include "rdo/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rdo/errors.hpp"

namespace rdo {

namespace {

using Sections = std::map<std::string, std::map<std::string, std::string>>;

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

Sections parse_sections(const std::string& text) {
    Sections out;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw SchemaError("line " + std::to_string(lineno), "malformed section header");
            section = trim(t.substr(1, t.size() - 2));
            out[section];
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw SchemaError("line " + std::to_string(lineno), "expected key = value");
        if (section.empty())
            throw SchemaError("line " + std::to_string(lineno), "key outside any [section]");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (out[section].count(key))
            throw SchemaError(section + "." + key, "duplicate key");
        out[section][key] = value;
    }
    return out;
}

struct Reader {
    const Sections& sections;
    // tracks consumption so unknown keys can be rejected
    mutable std::map<std::string, std::map<std::string, bool>> seen;

    const std::string* find(const std::string& sec, const std::string& key) const {
        auto s = sections.find(sec);
        if (s == sections.end()) return nullptr;
        auto k = s->second.find(key);
        if (k == s->second.end()) return nullptr;
        seen[sec][key] = true;
        return &k->second;
    }
    double number(const std::string& sec, const std::string& key, double fallback) const {
        const std::string* v = find(sec, key);
        if (!v) return fallback;
        try {
            size_t pos = 0;
            const double x = std::stod(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("trailing characters");
            return x;
        } catch (const std::exception&) {
            throw SchemaError(sec + "." + key, "not a number: '" + *v + "'");
        }
    }
    long integer(const std::string& sec, const std::string& key, long fallback) const {
        const double x = number(sec, key, static_cast<double>(fallback));
        const long i = std::lround(x);
        if (static_cast<double>(i) != x) throw SchemaError(sec + "." + key, "not an integer");
        return i;
    }
    bool boolean(const std::string& sec, const std::string& key, bool fallback) const {
        const std::string* v = find(sec, key);
        if (!v) return fallback;
        if (*v == "true" || *v == "1") return true;
        if (*v == "false" || *v == "0") return false;
        throw SchemaError(sec + "." + key, "expected true/false");
    }
    std::string text(const std::string& sec, const std::string& key,
                     const std::string& fallback) const {
        const std::string* v = find(sec, key);
        return v ? *v : fallback;
    }
    void reject_unknown() const {
        static const std::map<std::string, bool> known_sections = {
            {"model", true},  {"grid", true},         {"mask", true},  {"construction", true},
            {"stability", true}, {"time", true},      {"perturbation", true}, {"output", true}};
        for (const auto& [sec, keys] : sections) {
            if (!known_sections.count(sec)) throw SchemaError(sec, "unknown section");
            for (const auto& [key, value] : keys)
                if (!seen.count(sec) || !seen.at(sec).count(key))
                    throw SchemaError(sec + "." + key, "unknown key");
        }
    }
};

ExperimentConfig from_reader(const Reader& r) {
    ExperimentConfig c;
    c.model_name = r.text("model", "name", c.model_name);
    if (c.model_name != "fitzhugh")
        throw SchemaError("model.name", "unknown model '" + c.model_name + "'");
    c.beta = r.number("model", "beta", c.beta);
    c.sigma = r.number("model", "sigma", c.sigma);
    c.delta = r.number("model", "delta", c.delta);
    c.rho = r.number("model", "rho", c.rho);
    if (!(c.sigma > 0) || !(c.delta > 0) || !(c.rho >= 0))
        throw SchemaError("model", "sigma, delta must be positive and rho >= 0");
    if (!(c.beta > 0 && c.beta < 1)) throw SchemaError("model.beta", "beta must lie in (0,1)");

    c.nx = static_cast<int>(r.integer("grid", "nx", c.nx));
    c.ny = static_cast<int>(r.integer("grid", "ny", c.ny));
    c.lx = r.number("grid", "lx", c.lx);
    c.ly = r.number("grid", "ly", c.ly);
    if (c.nx < 2 || c.ny < 1) throw SchemaError("grid", "need nx >= 2 and ny >= 1");
    if (!(c.lx > 0) || !(c.ly > 0)) throw SchemaError("grid", "side lengths must be positive");

    const std::string shape = r.text("mask", "shape", "full");
    if (shape == "full") {
        c.mask = MaskSpec::full();
    } else if (shape == "rectangle" || shape == "pi") {
        const double x0 = r.number("mask", "x0", -1), y0 = r.number("mask", "y0", -1);
        const double x1 = r.number("mask", "x1", -1), y1 = r.number("mask", "y1", -1);
        if (x0 < 0 || y0 < 0 || x1 < 0 || y1 < 0)
            throw SchemaError("mask", shape + " needs x0, y0, x1, y1");
        c.mask = shape == "pi" ? MaskSpec::pi_glyph(x0, y0, x1, y1)
                               : MaskSpec::rectangle(x0, y0, x1, y1);
    } else if (shape == "random") {
        const double fraction = r.number("mask", "fraction", -1);
        if (fraction < 0 || fraction > 1)
            throw SchemaError("mask.fraction", "need a fraction in [0,1]");
        c.mask = MaskSpec::random(fraction,
                                  static_cast<std::uint64_t>(r.integer("mask", "seed", 0)));
    } else {
        throw SchemaError("mask.shape", "expected full | rectangle | pi | random");
    }

    c.gamma = r.number("construction", "gamma", c.gamma);
    if (!(c.gamma > 0)) throw SchemaError("construction.gamma", "gamma must be positive");
    const std::string branches = r.text("construction", "branches", "1,2");
    c.branches.clear();
    std::stringstream bs(branches);
    std::string tok;
    while (std::getline(bs, tok, ',')) {
        try {
            c.branches.push_back(std::stoi(trim(tok)));
        } catch (const std::exception&) {
            throw SchemaError("construction.branches", "expected comma-separated branch ids");
        }
    }
    if (c.branches.empty()) throw SchemaError("construction.branches", "need at least one id");
    for (int id : c.branches)
        if (id < 1 || id > 3)
            throw SchemaError("construction.branches", "fitzhugh branch ids are 1, 2, 3");
    c.tol = r.number("construction", "tol", c.tol);
    c.max_iter = static_cast<int>(r.integer("construction", "max_iter", c.max_iter));
    if (!(c.tol > 0) || c.max_iter < 1)
        throw SchemaError("construction", "tol must be positive and max_iter >= 1");

    c.kappa = r.number("stability", "kappa", c.kappa);
    c.alpha_samples = static_cast<int>(r.integer("stability", "alpha_samples", c.alpha_samples));
    c.beta_samples = static_cast<int>(r.integer("stability", "beta_samples", c.beta_samples));
    c.n_report = static_cast<int>(r.integer("stability", "n_report", c.n_report));
    c.dense_cap = static_cast<int>(r.integer("stability", "dense_cap", c.dense_cap));
    c.run_discrete_spectrum =
        r.boolean("stability", "run_discrete_spectrum", c.run_discrete_spectrum);
    c.deviation_exponent =
        static_cast<int>(r.integer("stability", "deviation_exponent", c.deviation_exponent));

    const std::string dt_text = r.text("time", "dt", "auto");
    if (dt_text == "auto") {
        c.dt = 0;
    } else {
        c.dt = r.number("time", "dt", 0);  // re-reads; also validates numeric
        if (!(c.dt > 0)) throw SchemaError("time.dt", "dt must be positive or 'auto'");
    }
    c.t_end = r.number("time", "t_end", c.t_end);
    if (!(c.t_end > 0)) throw SchemaError("time.t_end", "t_end must be positive");
    c.snapshot_stride = r.integer("time", "snapshot_stride", c.snapshot_stride);
    c.norm_stride = r.integer("time", "norm_stride", c.norm_stride);
    if (c.norm_stride < 1) throw SchemaError("time.norm_stride", "must be >= 1");
    c.allow_cfl_override = r.boolean("time", "allow_cfl_override", c.allow_cfl_override);

    c.perturb_mode = r.text("perturbation", "mode", c.perturb_mode);
    if (c.perturb_mode != "uniform" && c.perturb_mode != "random" &&
        c.perturb_mode != "eigenmode" && c.perturb_mode != "middle-state")
        throw SchemaError("perturbation.mode", "expected uniform | random | eigenmode | middle-state");
    c.amplitude = r.number("perturbation", "amplitude", c.amplitude);
    if (c.amplitude < 0) throw SchemaError("perturbation.amplitude", "must be >= 0");
    c.perturb_seed = static_cast<std::uint64_t>(r.integer("perturbation", "seed", 0));
    c.mode_k = static_cast<int>(r.integer("perturbation", "mode_k", c.mode_k));
    c.mode_m = static_cast<int>(r.integer("perturbation", "mode_m", c.mode_m));

    c.out_dir = r.text("output", "dir", c.out_dir);
    r.reject_unknown();
    return c;
}

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

KineticsModel ExperimentConfig::make_model() const {
    return fitzhugh_model(beta, sigma, delta, rho);
}

Grid ExperimentConfig::make_grid() const { return build_grid(nx, ny, lx, ly); }

std::vector<BranchFunction> ExperimentConfig::make_branches(const KineticsModel& model) const {
    std::vector<BranchFunction> out;
    for (int id : branches) out.push_back(fitzhugh_branch(model, id));
    return out;
}

Sections ExperimentConfig::to_sections() const {
    Sections s;
    s["model"] = {{"name", model_name},
                  {"beta", format_number(beta)},
                  {"sigma", format_number(sigma)},
                  {"delta", format_number(delta)},
                  {"rho", format_number(rho)}};
    s["grid"] = {{"nx", std::to_string(nx)},
                 {"ny", std::to_string(ny)},
                 {"lx", format_number(lx)},
                 {"ly", format_number(ly)}};
    switch (mask.shape) {
        case MaskSpec::Shape::full:
            s["mask"] = {{"shape", "full"}};
            break;
        case MaskSpec::Shape::rectangle:
        case MaskSpec::Shape::pi_glyph:
            s["mask"] = {{"shape", mask.shape == MaskSpec::Shape::pi_glyph ? "pi" : "rectangle"},
                         {"x0", format_number(mask.x0)},
                         {"y0", format_number(mask.y0)},
                         {"x1", format_number(mask.x1)},
                         {"y1", format_number(mask.y1)}};
            break;
        case MaskSpec::Shape::random:
            s["mask"] = {{"shape", "random"},
                         {"fraction", format_number(mask.fraction)},
                         {"seed", std::to_string(mask.seed)}};
            break;
    }
    std::string branch_list;
    for (size_t i = 0; i < branches.size(); ++i)
        branch_list += (i ? "," : "") + std::to_string(branches[i]);
    s["construction"] = {{"gamma", format_number(gamma)},
                         {"branches", branch_list},
                         {"tol", format_number(tol)},
                         {"max_iter", std::to_string(max_iter)}};
    s["stability"] = {{"kappa", format_number(kappa)},
                      {"alpha_samples", std::to_string(alpha_samples)},
                      {"beta_samples", std::to_string(beta_samples)},
                      {"n_report", std::to_string(n_report)},
                      {"dense_cap", std::to_string(dense_cap)},
                      {"run_discrete_spectrum", run_discrete_spectrum ? "true" : "false"},
                      {"deviation_exponent", std::to_string(deviation_exponent)}};
    s["time"] = {{"dt", dt > 0 ? format_number(dt) : "auto"},
                 {"t_end", format_number(t_end)},
                 {"snapshot_stride", std::to_string(snapshot_stride)},
                 {"norm_stride", std::to_string(norm_stride)},
                 {"allow_cfl_override", allow_cfl_override ? "true" : "false"}};
    s["perturbation"] = {{"mode", perturb_mode},
                         {"amplitude", format_number(amplitude)},
                         {"seed", std::to_string(perturb_seed)},
                         {"mode_k", std::to_string(mode_k)},
                         {"mode_m", std::to_string(mode_m)}};
    s["output"] = {{"dir", out_dir}};
    return s;
}

ExperimentConfig parse_config_text(const std::string& text) {
    const std::string t = trim(text);
    if (!t.empty() && t.front() == '{') {
        // manifest JSON: the resolved config is embedded under "config"
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(t);
        } catch (const nlohmann::json::exception& e) {
            throw SchemaError("<json>", e.what());
        }
        if (!j.contains("config")) throw SchemaError("config", "manifest lacks a config object");
        std::string flat;
        for (const auto& [sec, keys] : j["config"].items()) {
            flat += "[" + sec + "]\n";
            for (const auto& [key, value] : keys.items())
                flat += key + " = " + value.get<std::string>() + "\n";
        }
        return parse_config_text(flat);
    }
    const Sections sections = parse_sections(text);
    Reader r{sections, {}};
    return from_reader(r);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError(path.string(), "cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string make_manifest(const ExperimentConfig& cfg, const std::string& command, int threads,
                          std::optional<std::uint64_t> seed_override) {
    nlohmann::json j;
    j["version"] = library_version;
    j["command"] = command;
    j["threads"] = threads;
    if (seed_override)
        j["seed_override"] = *seed_override;
    else
        j["seed_override"] = nullptr;
    nlohmann::json cfgj;
    for (const auto& [sec, keys] : cfg.to_sections()) {
        for (const auto& [key, value] : keys) cfgj[sec][key] = value;
    }
    j["config"] = cfgj;
    return j.dump(2);
}

}  // namespace rdo
