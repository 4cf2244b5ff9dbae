#ifndef MFSC_CONFIG_HPP
#define MFSC_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mfsc/fem.hpp"
#include "mfsc/forcing.hpp"
#include "mfsc/linalg.hpp"

namespace mfsc {

// One experiment configuration, loaded from a JSON document.  Defaults
// reproduce the eta-sweep study (d = 3, 32 intervals, 20 steps, 10 modes,
// level 8); the sensitivity study overrides problem/discretization fields.
struct StudyConfig {
    // problem
    double horizon = 0.8;
    double mu = 0.01;
    std::string sigma_name = "paper";
    double sigma_value = 0.0;   // for "constant"
    Vector sigma_x, sigma_v;    // for "tabulated"
    std::string u0_name = "paper";
    std::size_t dim = 3;

    // discretization; snapshots counts the POD columns including the state
    // at t = 0, so the default keeps every time level
    std::size_t intervals = 32;
    std::size_t steps = 20;
    std::size_t snapshots = 21;
    std::size_t modes = 10;

    // collocation
    std::size_t level = 8;
    double map_bound = 4.0;
    Vector etas = {16.0, 4.0, 1.0, 0.5, 0.25};

    // mc
    std::size_t mc_samples = 10000;
    std::uint64_t seed = 1;

    // outputs
    std::string out_dir = ".";

    // optional explicit points for gfe/rom runs
    std::optional<Vector> xi;
    std::optional<Vector> zeta;

    SpatialAmplitude make_sigma() const;
    std::function<double(double)> make_u0() const;
    ForcingSpec make_forcing() const;
    GfeConfig make_gfe() const;
};

// Parses and validates; throws ConfigError naming the offending field.
StudyConfig load_config(const std::string& path);
StudyConfig parse_config_json(const std::string& text);
void validate(const StudyConfig& cfg);

} // namespace mfsc

#endif
