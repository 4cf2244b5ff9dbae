#include "mfsc/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mfsc/errors.hpp"

namespace mfsc {

using nlohmann::json;

SpatialAmplitude StudyConfig::make_sigma() const {
    if (sigma_name == "paper") return SpatialAmplitude::paper();
    if (sigma_name == "zero") return SpatialAmplitude::constant(0.0);
    if (sigma_name == "constant") return SpatialAmplitude::constant(sigma_value);
    if (sigma_name == "tabulated") return SpatialAmplitude::tabulated(sigma_x, sigma_v);
    throw ConfigError("problem.sigma: unknown amplitude '" + sigma_name + "'");
}

std::function<double(double)> StudyConfig::make_u0() const {
    if (u0_name == "paper") return initial_condition_paper();
    if (u0_name == "zero") return initial_condition_zero();
    throw ConfigError("problem.u0: unknown initial condition '" + u0_name + "'");
}

ForcingSpec StudyConfig::make_forcing() const {
    return ForcingSpec{make_sigma(), horizon, dim, TemporalBasis::Trigonometric};
}

GfeConfig StudyConfig::make_gfe() const {
    GfeConfig gfe;
    gfe.mesh = Mesh1D::uniform(intervals);
    gfe.mu = mu;
    gfe.steps = steps;
    gfe.u0 = make_u0();
    gfe.spec = make_forcing();
    return gfe;
}

namespace {

template <typename T>
void read_field(const json& obj, const char* section, const char* key, T& value) {
    if (!obj.contains(key)) return;
    try {
        value = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string(section) + "." + key + ": invalid value");
    }
}

} // namespace

StudyConfig parse_config_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& err) {
        throw ConfigError(std::string("config: invalid JSON: ") + err.what());
    }

    StudyConfig cfg;
    if (doc.contains("problem")) {
        const json& p = doc["problem"];
        read_field(p, "problem", "T", cfg.horizon);
        read_field(p, "problem", "mu", cfg.mu);
        read_field(p, "problem", "u0", cfg.u0_name);
        read_field(p, "problem", "d", cfg.dim);
        if (p.contains("sigma")) {
            const json& s = p["sigma"];
            if (s.is_string()) {
                cfg.sigma_name = s.get<std::string>();
            } else if (s.is_object()) {
                read_field(s, "problem.sigma", "name", cfg.sigma_name);
                read_field(s, "problem.sigma", "value", cfg.sigma_value);
                read_field(s, "problem.sigma", "x", cfg.sigma_x);
                read_field(s, "problem.sigma", "values", cfg.sigma_v);
            } else {
                throw ConfigError("problem.sigma: expected a name or an object");
            }
        }
    }
    if (doc.contains("discretization")) {
        const json& d = doc["discretization"];
        read_field(d, "discretization", "intervals", cfg.intervals);
        read_field(d, "discretization", "steps", cfg.steps);
        read_field(d, "discretization", "snapshots", cfg.snapshots);
        read_field(d, "discretization", "modes", cfg.modes);
        if (!d.contains("snapshots")) cfg.snapshots = cfg.steps + 1; // every level
    } else {
        cfg.snapshots = cfg.steps + 1;
    }
    if (doc.contains("collocation")) {
        const json& c = doc["collocation"];
        read_field(c, "collocation", "level", cfg.level);
        read_field(c, "collocation", "map_bound", cfg.map_bound);
        read_field(c, "collocation", "etas", cfg.etas);
    }
    if (doc.contains("mc")) {
        const json& m = doc["mc"];
        read_field(m, "mc", "samples", cfg.mc_samples);
        read_field(m, "mc", "seed", cfg.seed);
    }
    if (doc.contains("output")) {
        const json& o = doc["output"];
        read_field(o, "output", "directory", cfg.out_dir);
    }
    if (doc.contains("xi")) {
        Vector xi;
        read_field(doc, "config", "xi", xi);
        cfg.xi = xi;
    }
    if (doc.contains("zeta")) {
        Vector zeta;
        read_field(doc, "config", "zeta", zeta);
        cfg.zeta = zeta;
    }
    validate(cfg);
    return cfg;
}

StudyConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_json(buffer.str());
}

void validate(const StudyConfig& cfg) {
    if (!(cfg.horizon > 0.0)) throw ConfigError("problem.T: must be positive");
    if (!(cfg.mu > 0.0)) throw ConfigError("problem.mu: must be positive");
    if (cfg.dim < 1) throw ConfigError("problem.d: must be >= 1");
    if (cfg.intervals < 3) throw ConfigError("discretization.intervals: must be >= 3");
    if (cfg.steps < 1) throw ConfigError("discretization.steps: must be >= 1");
    if (cfg.snapshots < 2) throw ConfigError("discretization.snapshots: must be >= 2");
    if (cfg.steps % (cfg.snapshots - 1) != 0)
        throw ConfigError("discretization.snapshots: snapshots-1 must divide discretization.steps");
    if (cfg.modes < 1) throw ConfigError("discretization.modes: must be >= 1");
    if (!(cfg.map_bound > 0.0)) throw ConfigError("collocation.map_bound: must be positive");
    if (cfg.etas.empty()) throw ConfigError("collocation.etas: must not be empty");
    for (double eta : cfg.etas)
        if (!(eta > 0.0)) throw ConfigError("collocation.etas: entries must be positive");
    if (cfg.mc_samples < 1) throw ConfigError("mc.samples: must be >= 1");
    if (cfg.xi && cfg.xi->size() != cfg.dim)
        throw ConfigError("xi: length must equal problem.d");
    if (cfg.zeta && cfg.zeta->size() != cfg.dim)
        throw ConfigError("zeta: length must equal problem.d");
}

} // namespace mfsc
