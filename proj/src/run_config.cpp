// run_config.cpp — JSON configuration and record plumbing

#include "cavitygate/run_config.hpp"

#include "json.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>

namespace cavitygate {

using nlohmann::json;

// ------- configuration -------

PhysicalParams RunConfig::physical() const {
    PhysicalParams p;
    p.g = g;
    p.g_r = g_r;
    p.delta_c = delta_c_over_g * g;
    const double factor =
        rate_convention == RateConvention::halved ? 0.5 : 1.0;
    if (zero_dissipation) {
        p.kappa = p.gamma_21 = p.gamma_20 = p.gamma_10 = 0.0;
    } else {
        p.kappa = factor / kappa_inv_s;
        p.gamma_21 = factor / gamma_21_inv_s;
        p.gamma_20 = factor / gamma_20_inv_s;
        p.gamma_10 = factor / gamma_10_inv_s;
    }
    return p;
}

SystemConfig RunConfig::system() const {
    SystemConfig cfg;
    cfg.n_targets = n_targets;
    cfg.fock_cutoff = fock_cutoff;
    cfg.include_control = true;
    return cfg;
}

EvolutionSettings RunConfig::evolution() const {
    EvolutionSettings s;
    s.dt_max = dt_max_s * debug.dt_scale;
    s.steps_per_fastest_period =
        std::max(1, int(steps_per_fastest_period / debug.dt_scale));
    s.max_steps = max_steps;
    return s;
}

void RunConfig::validate() const {
    try {
        system().validate();
        physical().validate();
        evolution().validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (kappa_inv_s <= 0 || gamma_21_inv_s <= 0 || gamma_20_inv_s <= 0 ||
        gamma_10_inv_s <= 0)
        throw ConfigError("config: decay times must be positive");
    if (delta_c_over_g <= 0)
        throw ConfigError("config: delta_c_over_g must be positive");
    if (ratios.empty())
        throw ConfigError("config: ratios must not be empty");
    double previous = 0.0;
    for (const double r : ratios) {
        if (r <= previous)
            throw ConfigError(
                "config: ratios must be positive and strictly ascending");
        previous = r;
    }
    if (debug.dt_scale <= 0)
        throw ConfigError("config: debug.dt_scale must be positive");
    if (out_dir.empty()) throw ConfigError("config: out_dir must not be empty");
}

namespace {

void require_known_keys(const json& object, const std::set<std::string>& known,
                        const char* where) {
    for (const auto& item : object.items())
        if (!known.contains(item.key()))
            throw ConfigError(std::string("config: unknown key '") +
                              item.key() + "' in " + where);
}

template <typename T>
void read(const json& object, const char* key, T& into) {
    const auto it = object.find(key);
    if (it == object.end()) return;
    try {
        into = it->get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config: wrong type for '") + key + "'");
    }
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw ConfigError("config: document must be a JSON object");

    static const std::set<std::string> known = {
        "n_targets",      "fock_cutoff",
        "g",              "g_r",
        "delta_c_over_g", "kappa_inv_s",
        "gamma_21_inv_s", "gamma_20_inv_s",
        "gamma_10_inv_s", "zero_dissipation",
        "rate_convention", "k_scaling",
        "ratios",         "dt_max_s",
        "steps_per_fastest_period", "max_steps",
        "out_dir",        "debug",
    };
    require_known_keys(doc, known, "the top-level object");

    RunConfig config;
    read(doc, "n_targets", config.n_targets);
    read(doc, "fock_cutoff", config.fock_cutoff);
    read(doc, "g", config.g);
    if (doc.contains("g_r")) {
        read(doc, "g_r", config.g_r);
    } else {
        config.g_r = config.g;  // resonant coupling tracks g unless overridden
    }
    read(doc, "delta_c_over_g", config.delta_c_over_g);
    read(doc, "kappa_inv_s", config.kappa_inv_s);
    read(doc, "gamma_21_inv_s", config.gamma_21_inv_s);
    read(doc, "gamma_20_inv_s", config.gamma_20_inv_s);
    read(doc, "gamma_10_inv_s", config.gamma_10_inv_s);
    read(doc, "zero_dissipation", config.zero_dissipation);

    std::string convention = "printed";
    read(doc, "rate_convention", convention);
    if (convention == "printed") {
        config.rate_convention = RateConvention::printed;
    } else if (convention == "halved") {
        config.rate_convention = RateConvention::halved;
    } else {
        throw ConfigError("config: rate_convention must be printed or halved");
    }

    std::string scaling = "sqrt-n";
    read(doc, "k_scaling", scaling);
    if (scaling == "fixed") {
        config.k_scaling = KScaling::fixed;
    } else if (scaling == "sqrt-n") {
        config.k_scaling = KScaling::sqrt_n;
    } else {
        throw ConfigError("config: k_scaling must be fixed or sqrt-n");
    }

    read(doc, "ratios", config.ratios);
    read(doc, "dt_max_s", config.dt_max_s);
    read(doc, "steps_per_fastest_period", config.steps_per_fastest_period);
    read(doc, "max_steps", config.max_steps);
    read(doc, "out_dir", config.out_dir);

    if (const auto it = doc.find("debug"); it != doc.end()) {
        if (!it->is_object())
            throw ConfigError("config: debug must be an object");
        require_known_keys(*it, {"flip_heff_sign", "dt_scale"}, "debug");
        read(*it, "flip_heff_sign", config.debug.flip_heff_sign);
        read(*it, "dt_scale", config.debug.dt_scale);
    }

    config.validate();
    return config;
}

std::string config_to_json(const RunConfig& config) {
    json doc;
    doc["n_targets"] = config.n_targets;
    doc["fock_cutoff"] = config.fock_cutoff;
    doc["g"] = config.g;
    doc["g_r"] = config.g_r;
    doc["delta_c_over_g"] = config.delta_c_over_g;
    doc["kappa_inv_s"] = config.kappa_inv_s;
    doc["gamma_21_inv_s"] = config.gamma_21_inv_s;
    doc["gamma_20_inv_s"] = config.gamma_20_inv_s;
    doc["gamma_10_inv_s"] = config.gamma_10_inv_s;
    doc["zero_dissipation"] = config.zero_dissipation;
    doc["rate_convention"] =
        config.rate_convention == RateConvention::halved ? "halved" : "printed";
    doc["k_scaling"] =
        config.k_scaling == KScaling::fixed ? "fixed" : "sqrt-n";
    doc["ratios"] = config.ratios;
    doc["dt_max_s"] = config.dt_max_s;
    doc["steps_per_fastest_period"] = config.steps_per_fastest_period;
    doc["max_steps"] = config.max_steps;
    doc["out_dir"] = config.out_dir;
    doc["debug"] = {{"flip_heff_sign", config.debug.flip_heff_sign},
                    {"dt_scale", config.debug.dt_scale}};
    return doc.dump(2);
}

// ------- result records -------

std::string ResultRecord::to_json() const {
    json doc;
    doc["schema_version"] = schema_version;
    doc["command"] = command;
    doc["config"] = json::parse(config_to_json(config));
    doc["outputs"] =
        outputs_json.empty() ? json::object() : json::parse(outputs_json);
    doc["diagnostics"] = diagnostics_json.empty() ? json::object()
                                                  : json::parse(diagnostics_json);
    return doc.dump(2) + "\n";
}

// ------- formatting -------

std::string format_double(double value) {
    char buffer[40];
    const auto result =
        std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

std::string format_state(const Vector& amplitudes, const SpaceDescriptor& space,
                         double threshold) {
    std::string text;
    for (long idx = 0; idx < amplitudes.size(); ++idx) {
        const Complex a = amplitudes(idx);
        if (std::abs(a) <= threshold) continue;
        if (!text.empty()) text += " + ";
        text += "(" + format_double(a.real());
        text += a.imag() < 0 ? "-" : "+";
        text += format_double(std::abs(a.imag())) + "i)";
        text += basis_label(space, idx);
    }
    return text.empty() ? "0" : text;
}

// ------- artifact files -------

void write_file(const std::string& dir, const std::string& name,
                const std::string& text) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("write_file: cannot create directory " + dir);
    const fs::path path = fs::path(dir) / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_file: cannot open " + path.string());
    out << text;
    if (!out.good())
        throw std::runtime_error("write_file: short write to " + path.string());
}

}  // namespace cavitygate
