#pragma once

#include <filesystem>
#include <string_view>

#include <json.hpp>

namespace trajtalk {

// Tuning constants for turning a modification into new waypoints.
struct ApplyParams {
    double sigma{0.07};       // m, spread of the Gaussian decay around a landmark
    double k_p{0.01};         // m^-2, attractive gain
    double eta{0.5};          // m^2, repulsive gain
    double rho0{0.1};         // m, repulsion range
    double v_max{0.1};        // m/s, safety cap on speed
    double v_min{0.005};      // m/s, floor so "slower" can never stall playback
    double f_max{15.0};       // N
    double delta_max{0.05};   // m, per-utterance displacement cap per waypoint
    double eps_d{1e-6};       // m, distance floor in weights and repulsion

    friend bool operator==(const ApplyParams&, const ApplyParams&) = default;
};

// Throws ValidationError unless all positive and v_min < v_max.
void validate(const ApplyParams& params);

// Missing keys keep their defaults; unknown keys are rejected.
[[nodiscard]] ApplyParams apply_params_from_yaml(std::string_view text, std::string_view origin = "<params>");
[[nodiscard]] ApplyParams load_apply_params(const std::filesystem::path& path);
[[nodiscard]] ApplyParams apply_params_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json to_json(const ApplyParams& params);

}  // namespace trajtalk
