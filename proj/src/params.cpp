#include "optomech/params.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "optomech/errors.hpp"

namespace optomech {

namespace {

using nlohmann::json;

struct NumericField {
    const char* key;
    double InterferometerConfig::*member;
};

constexpr NumericField kNumericFields[] = {
    {"mirror_mass_m0", &InterferometerConfig::mirror_mass_m0},
    {"pendulum_length_L", &InterferometerConfig::pendulum_length_L},
    {"quality_Q", &InterferometerConfig::quality_Q},
    {"temperature_T", &InterferometerConfig::temperature_T},
    {"circulating_power_P", &InterferometerConfig::circulating_power_P},
    {"signal_recycling_gain_G", &InterferometerConfig::signal_recycling_gain_G},
    {"squeeze_parameter_r", &InterferometerConfig::squeeze_parameter_r},
    {"wavelength_lambda", &InterferometerConfig::wavelength_lambda},
    {"sensing_noise_asd", &InterferometerConfig::sensing_noise_asd},
    {"classical_force_noise_asd", &InterferometerConfig::classical_force_noise_asd},
    {"differential_gain_ratio", &InterferometerConfig::differential_gain_ratio},
    {"common_gain_ratio", &InterferometerConfig::common_gain_ratio},
};

constexpr const char* kSqueezeKey = "squeeze_phase_mode";

void require(bool ok, const char* field, const std::string& message) {
    if (!ok) throw ConfigError(field, message);
}

}  // namespace

std::string_view to_string(SqueezePhase phase) {
    switch (phase) {
        case SqueezePhase::ShotNoiseReduced: return "shot-noise-reduced";
        case SqueezePhase::BackActionReduced: return "back-action-reduced";
        case SqueezePhase::None: return "none";
    }
    return "none";
}

SqueezePhase squeeze_phase_from_string(std::string_view text) {
    if (text == "shot-noise-reduced") return SqueezePhase::ShotNoiseReduced;
    if (text == "back-action-reduced") return SqueezePhase::BackActionReduced;
    if (text == "none") return SqueezePhase::None;
    throw ConfigError(kSqueezeKey, std::string(kSqueezeKey) + ": unknown value '" + std::string(text) +
                                       "' (expected shot-noise-reduced, back-action-reduced or none)");
}

void validate(const InterferometerConfig& cfg) {
    for (const auto& f : kNumericFields) {
        require(std::isfinite(cfg.*f.member), f.key, std::string(f.key) + " must be finite");
    }
    require(cfg.mirror_mass_m0 > 0, "mirror_mass_m0", "mirror_mass_m0 must be positive");
    require(cfg.pendulum_length_L > 0, "pendulum_length_L", "pendulum_length_L must be positive");
    require(cfg.quality_Q > 1, "quality_Q", "quality_Q must exceed 1");
    require(cfg.temperature_T >= 0, "temperature_T", "temperature_T must be non-negative");
    require(cfg.circulating_power_P >= 0, "circulating_power_P", "circulating_power_P must be non-negative");
    require(cfg.signal_recycling_gain_G >= 1, "signal_recycling_gain_G", "signal_recycling_gain_G must be at least 1");
    require(cfg.squeeze_parameter_r >= 0, "squeeze_parameter_r", "squeeze_parameter_r must be non-negative");
    require(cfg.wavelength_lambda > 0, "wavelength_lambda", "wavelength_lambda must be positive");
    require(cfg.sensing_noise_asd >= 0, "sensing_noise_asd", "sensing_noise_asd must be non-negative");
    require(cfg.classical_force_noise_asd >= 0, "classical_force_noise_asd",
            "classical_force_noise_asd must be non-negative");
    require(cfg.differential_gain_ratio > 0, "differential_gain_ratio", "differential_gain_ratio must be positive");
    require(cfg.common_gain_ratio > 0, "common_gain_ratio", "common_gain_ratio must be positive");
}

InterferometerConfig load_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("", "config document must be a JSON object");

    InterferometerConfig cfg;
    for (const auto& [key, value] : doc.items()) {
        if (key == kSqueezeKey) {
            require(value.is_string(), kSqueezeKey, std::string(kSqueezeKey) + " must be a string");
            cfg.squeeze_phase_mode = squeeze_phase_from_string(value.get<std::string>());
            continue;
        }
        const NumericField* field = nullptr;
        for (const auto& f : kNumericFields) {
            if (key == f.key) field = &f;
        }
        if (field == nullptr) throw ConfigError(key, "unknown config field '" + key + "'");
        if (!value.is_number()) throw ConfigError(key, key + " must be a number");
        cfg.*field->member = value.get<double>();
    }
    validate(cfg);
    return cfg;
}

InterferometerConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_config(buf.str());
}

nlohmann::json to_json(const InterferometerConfig& cfg) {
    json doc = json::object();
    for (const auto& f : kNumericFields) doc[f.key] = cfg.*f.member;
    doc[kSqueezeKey] = std::string(to_string(cfg.squeeze_phase_mode));
    return doc;
}

std::string dump_config(const InterferometerConfig& cfg) { return to_json(cfg).dump(2); }

DerivedParams derive(const InterferometerConfig& cfg) {
    using C = PhysicalConstants;
    DerivedParams d{};
    d.reduced_mass_m = cfg.mirror_mass_m0 / 2.0;
    d.pendulum_omega0 = std::sqrt(C::g / cfg.pendulum_length_L);
    d.optical_omega = 2.0 * std::numbers::pi * C::c / cfg.wavelength_lambda;

    const double squeezed = std::exp(-2.0 * cfg.squeeze_parameter_r);
    const double anti = std::exp(2.0 * cfg.squeeze_parameter_r);
    switch (cfg.squeeze_phase_mode) {
        case SqueezePhase::ShotNoiseReduced:
            d.shot_noise_factor = squeezed;
            d.backaction_factor = anti;
            break;
        case SqueezePhase::BackActionReduced:
            d.shot_noise_factor = anti;
            d.backaction_factor = squeezed;
            break;
        case SqueezePhase::None:
            d.shot_noise_factor = 1.0;
            d.backaction_factor = 1.0;
            break;
    }
    return d;
}

}  // namespace optomech
