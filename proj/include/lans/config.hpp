#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lans/params.hpp"

namespace lans {

/// Settings of one CLI run. The text form is flat `key = value` lines, a
/// TOML subset: numbers, booleans, quoted strings and `[a, b]` number lists.
struct RunConfig {
    std::string command = "channel-rho";
    PhysicalParams params;

    // 1D problems
    std::size_t n = 1025;
    std::string method = "collocation"; // shooting | collocation | both
    double tol = 1e-9;
    double steady_tol = 1e-9;
    double dt = 1e-2;
    double t_max = 50.0;
    double theta = 0.5;
    std::vector<double> snapshot_times{0.1, 1.0, 10.0};
    std::string boundary = "noslip";    // noslip | shear
    std::string rho_source = "auto";    // auto | bvp | closed-form | constant
    bool order_check = false;
    double t_eval = 2.0;
    double t_min = 10.0;
    double t_final = 100.0;
    std::size_t t_samples = 91;

    // Periodic box
    int torus_dim = 2;
    std::size_t torus_n = 64;
    double torus_alpha = 0.1;
    double torus_nu = 0.0;
    double torus_dt = 1e-3;
    double torus_t_end = 1.0;
    std::string torus_init = "mixed";   // mixed | taylor-green-plus | random
    double forcing = 0.0;
    bool check_forms = false;
    std::size_t form_samples = 100;
    std::vector<double> alpha_sweep;
    bool snapshot = false;

    std::string outdir = "out";
    std::uint64_t seed = 1;
    std::size_t jobs = 1;

    bool operator==(const RunConfig&) const = default;
};

/// Keys accepted in files and as `--key value` overrides (dashes and
/// underscores are interchangeable on the command line).
const std::vector<std::string>& config_keys();
bool is_flag_key(const std::string& key);

/// Throws ConfigError naming the key and, for files, the line.
void set_config_value(RunConfig& c, const std::string& key, const std::string& value);
std::string get_config_value(const RunConfig& c, const std::string& key);

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& c);

/// Range checks: tolerances and steps > 0, known enumerations, valid grid sizes.
void validate_config(const RunConfig& c);

} // namespace lans
