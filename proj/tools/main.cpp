// main.cpp — command-line front end for the gate simulator

#include "cavitygate/commands.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace cavitygate;

namespace {

std::string read_config_text(const std::string& path) {
    if (path == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        return buffer.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<double> log_spaced(double lo, double hi, int count) {
    if (lo <= 0 || hi <= lo || count < 2)
        throw ConfigError(
            "config: ratio range needs 0 < min < max and at least 2 steps");
    std::vector<double> out(count);
    const double step = (std::log(hi) - std::log(lo)) / double(count - 1);
    for (int i = 0; i < count; ++i) out[i] = std::exp(std::log(lo) + i * step);
    out.front() = lo;
    out.back() = hi;
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulator for a cavity-mediated multi-target controlled-phase "
                 "gate: truth tables, fidelity sweeps, GHZ preparation"};
    app.fallthrough();
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string k_scaling;
    int n_targets = 0;
    double ratio_min = 0.0, ratio_max = 0.0;
    int ratio_steps = 0;
    bool zero_dissipation = false;

    app.add_option("--config", config_path,
                   "JSON configuration file, or '-' to read standard input");
    app.add_option("--out", out_dir, "directory for results.csv / record.json");
    app.add_option("--n", n_targets, "number of target atoms");
    app.add_option("--ratio-min", ratio_min, "smallest detuning ratio to sweep");
    app.add_option("--ratio-max", ratio_max, "largest detuning ratio to sweep");
    app.add_option("--ratio-steps", ratio_steps,
                   "log-spaced point count between ratio-min and ratio-max");
    app.add_flag("--zero-dissipation", zero_dissipation,
                 "switch off every decay channel");
    app.add_option("--k-scaling", k_scaling,
                   "detuning growth with target count: fixed or sqrt-n");

    auto* truth = app.add_subcommand(
        "truth-table", "run every basis input through the ideal gate");
    auto* sweep = app.add_subcommand(
        "sweep", "lossy gate fidelity across detuning ratios");
    auto* ghz = app.add_subcommand("ghz", "prepare a GHZ state, ideal and lossy");
    auto* validate =
        app.add_subcommand("validate", "run the fast invariant checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config_error;
    }

    try {
        RunConfig config;
        if (!config_path.empty())
            config = parse_config(read_config_text(config_path));

        if (n_targets > 0) config.n_targets = n_targets;
        if (!out_dir.empty()) config.out_dir = out_dir;
        if (zero_dissipation) config.zero_dissipation = true;
        if (!k_scaling.empty()) {
            if (k_scaling == "fixed") {
                config.k_scaling = KScaling::fixed;
            } else if (k_scaling == "sqrt-n") {
                config.k_scaling = KScaling::sqrt_n;
            } else {
                throw ConfigError("config: --k-scaling must be fixed or sqrt-n");
            }
        }
        if (ratio_steps > 0 || ratio_min > 0 || ratio_max > 0)
            config.ratios = log_spaced(ratio_min, ratio_max, ratio_steps);

        if (truth->parsed()) return cmd_truth_table(config, std::cout);
        if (sweep->parsed()) return cmd_fidelity_sweep(config, std::cout);
        if (ghz->parsed()) return cmd_ghz(config, std::cout);
        if (validate->parsed()) return cmd_validate(config, std::cout);
        return exit_config_error;  // unreachable with require_subcommand
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return exit_config_error;
    } catch (const IntegrationError& e) {
        std::cerr << e.what() << "\n";
        return exit_integration_failure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
