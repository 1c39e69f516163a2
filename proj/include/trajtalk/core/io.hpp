#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "trajtalk/core/landmarks.hpp"
#include "trajtalk/core/trajectory.hpp"

namespace trajtalk {

// Shortest decimal text that parses back to exactly `v`.
[[nodiscard]] std::string format_double(double v);

// Trajectory file: a YAML (or JSON) list of {t, pos: [x, y, z], vel, force}.
// Errors are ParseError / ValidationError messages prefixed with "file:line:".
[[nodiscard]] Trajectory parse_trajectory(std::string_view text, std::string_view origin = "<input>");
[[nodiscard]] Trajectory load_trajectory(const std::filesystem::path& path);

// Landmark file: a map of name -> [x, y, z].
[[nodiscard]] LandmarkSet parse_landmarks(std::string_view text, std::string_view origin = "<input>");
[[nodiscard]] LandmarkSet load_landmarks(const std::filesystem::path& path);

// One flow-style record per line; parse_trajectory reads it back bitwise.
[[nodiscard]] std::string trajectory_to_yaml(const Trajectory& traj);
// Written as JSON when the extension is .json, YAML otherwise.
void save_trajectory(const Trajectory& traj, const std::filesystem::path& path);

[[nodiscard]] nlohmann::json to_json(const Trajectory& traj);
[[nodiscard]] nlohmann::json to_json(const LandmarkSet& lms);
[[nodiscard]] Trajectory trajectory_from_json(const nlohmann::json& j);
[[nodiscard]] LandmarkSet landmarks_from_json(const nlohmann::json& j);

// Hex SHA-256 of the canonical YAML form; identical trajectories hash equally.
[[nodiscard]] std::string trajectory_hash(const Trajectory& traj);
[[nodiscard]] std::string sha256_hex(std::string_view data);

[[nodiscard]] std::string read_file(const std::filesystem::path& path);

}  // namespace trajtalk
