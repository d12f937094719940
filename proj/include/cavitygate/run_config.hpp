// run_config.hpp — run configuration, result records, and output formatting

#pragma once

#include "cavitygate/fidelity.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace cavitygate {

// ------- configuration -------

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class RateConvention {
    printed,  // rates are the inverse of the configured decay times
    halved,   // all rates multiplied by 1/2 (the alternative reading of the
              // dissipator, where the decay times refer to energy relaxation)
};

struct DebugHooks {
    bool flip_heff_sign = false;  // negative control for the Stark check
    double dt_scale = 1.0;        // stretches the resolved step
};

struct RunConfig {
    int n_targets = 4;
    int fock_cutoff = 1;
    double g = two_pi * 50e3;    // rad/s
    double g_r = two_pi * 50e3;  // rad/s; defaults to g when omitted
    double delta_c_over_g = 10.0;
    double kappa_inv_s = 3.0e-2;
    double gamma_21_inv_s = 3.0e-2;
    double gamma_20_inv_s = 3.0e-2;
    double gamma_10_inv_s = 3.0e-2;
    bool zero_dissipation = false;
    RateConvention rate_convention = RateConvention::printed;
    KScaling k_scaling = KScaling::sqrt_n;
    std::vector<double> ratios = {2.0, 5.0, 10.0, 20.0, 40.0};
    double dt_max_s = 1.0e-6;
    int steps_per_fastest_period = 50;
    long max_steps = 5'000'000;
    std::string out_dir = ".";
    DebugHooks debug;

    // rates resolved from decay times, convention, and the zero flag;
    // delta_c = delta_c_over_g * g
    PhysicalParams physical() const;
    SystemConfig system() const;
    EvolutionSettings evolution() const;

    void validate() const;  // throws ConfigError
};

// Parses a JSON document; unknown keys, wrong types, and out-of-range
// values are all rejected with ConfigError.
RunConfig parse_config(const std::string& json_text);

// Canonical full echo (every field explicit) — parse_config(config_to_json(c))
// reproduces c.
std::string config_to_json(const RunConfig& config);

// ------- result records -------

struct ResultRecord {
    int schema_version = 1;
    std::string command;
    RunConfig config;
    std::string outputs_json;      // command-specific, a JSON object
    std::string diagnostics_json;  // command-specific, a JSON object

    std::string to_json() const;  // deterministic: no timing inside
};

// ------- formatting -------

// shortest decimal string that round-trips the exact double
std::string format_double(double value);

// nonzero components of a state as "(re+im i)|label> + ...", or "0"
std::string format_state(const Vector& amplitudes, const SpaceDescriptor& space,
                         double threshold = 1e-12);

// ------- artifact files -------

// Writes text to dir/name atomically enough for our purposes; creates dir.
void write_file(const std::string& dir, const std::string& name,
                const std::string& text);

}  // namespace cavitygate
