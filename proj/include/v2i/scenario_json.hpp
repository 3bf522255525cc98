#pragma once

#include <string>

#include <json.hpp>

#include "v2i/scenario.hpp"

namespace v2i {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// JSON (de)serialization of ScenarioConfig. Documents use exactly the field
// names below; unknown keys are rejected, missing keys keep their defaults.
inline ScenarioConfig scenario_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
    ScenarioConfig cfg;
    for (const auto& [key, value] : doc.items()) {
        auto number = [&]() -> double {
            if (!value.is_number()) throw ConfigError("config: field '" + key + "' must be a number");
            return value.get<double>();
        };
        if (key == "road_length") cfg.road_length = number();
        else if (key == "bs_height") cfg.bs_height = number();
        else if (key == "bs_safety") cfg.bs_safety = number();
        else if (key == "bs_density") cfg.bs_density = number();
        else if (key == "tx_power") cfg.tx_power = number();
        else if (key == "carrier_freq") cfg.carrier_freq = number();
        else if (key == "bandwidth") cfg.bandwidth = number();
        else if (key == "path_loss_exp") cfg.path_loss_exp = number();
        else if (key == "tx_gain") cfg.tx_gain = number();
        else if (key == "rx_gain") cfg.rx_gain = number();
        else if (key == "noise_power") cfg.noise_power = number();
        else if (key == "fading_rate") cfg.fading_rate = number();
        else if (key == "ho_delay") cfg.ho_delay = number();
        else if (key == "rate_threshold") cfg.rate_threshold = number();
        else if (key == "v_max") cfg.v_max = number();
        else if (key == "mu_max") cfg.mu_max = number();
        else if (key == "spacing_mu") cfg.spacing_mu = number();
        else if (key == "spacing_sigma") cfg.spacing_sigma = number();
        else if (key == "processing_time") cfg.processing_time = number();
        else if (key == "crash_tolerance") cfg.crash_tolerance = number();
        else if (key == "num_cavs") {
            if (!value.is_number_integer())
                throw ConfigError("config: field 'num_cavs' must be an integer");
            cfg.num_cavs = value.get<int>();
        } else {
            throw ConfigError("config: unknown field '" + key + "'");
        }
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

inline nlohmann::json scenario_to_json(const ScenarioConfig& cfg) {
    return nlohmann::json{{"road_length", cfg.road_length},
                          {"bs_height", cfg.bs_height},
                          {"bs_safety", cfg.bs_safety},
                          {"bs_density", cfg.bs_density},
                          {"tx_power", cfg.tx_power},
                          {"carrier_freq", cfg.carrier_freq},
                          {"bandwidth", cfg.bandwidth},
                          {"path_loss_exp", cfg.path_loss_exp},
                          {"tx_gain", cfg.tx_gain},
                          {"rx_gain", cfg.rx_gain},
                          {"noise_power", cfg.noise_power},
                          {"fading_rate", cfg.fading_rate},
                          {"ho_delay", cfg.ho_delay},
                          {"rate_threshold", cfg.rate_threshold},
                          {"v_max", cfg.v_max},
                          {"mu_max", cfg.mu_max},
                          {"spacing_mu", cfg.spacing_mu},
                          {"spacing_sigma", cfg.spacing_sigma},
                          {"processing_time", cfg.processing_time},
                          {"crash_tolerance", cfg.crash_tolerance},
                          {"num_cavs", cfg.num_cavs}};
}

inline ScenarioConfig scenario_from_json_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return scenario_from_json(doc);
}

}  // namespace v2i
