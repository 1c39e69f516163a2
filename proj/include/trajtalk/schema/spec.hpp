#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trajtalk/schema/multiplier.hpp"

namespace trajtalk {

// Absent multiplier fields mean "no change".
struct GlobalChange {
    std::optional<Multiplier> velocity;
    std::optional<Multiplier> force;
    bool stop{false};
    bool clarification{false};

    [[nodiscard]] bool has_scaling() const noexcept { return velocity || force; }
    friend bool operator==(const GlobalChange&, const GlobalChange&) = default;
};

struct LandmarkChange {
    std::optional<Multiplier> attract;
    std::optional<Multiplier> velocity;
    std::optional<Multiplier> force;

    [[nodiscard]] bool empty() const noexcept { return !attract && !velocity && !force; }
    friend bool operator==(const LandmarkChange&, const LandmarkChange&) = default;
};

struct WaypointChange {
    std::size_t index{1};  // 1-based, as written in the YAML key
    std::optional<Multiplier> velocity;
    std::optional<Multiplier> force;

    [[nodiscard]] bool empty() const noexcept { return !velocity && !force; }
    friend bool operator==(const WaypointChange&, const WaypointChange&) = default;
};

// One utterance's worth of changes at the global, landmark and waypoint scopes.
struct ModificationSpec {
    GlobalChange global;
    std::map<std::string, LandmarkChange, std::less<>> landmarks;
    std::map<std::size_t, WaypointChange> waypoints;

    // Any scaling, attraction or stop request.
    [[nodiscard]] bool has_changes() const noexcept;
    [[nodiscard]] bool changes_velocity() const noexcept;
    [[nodiscard]] bool changes_force() const noexcept;
    [[nodiscard]] bool changes_position() const noexcept;
    [[nodiscard]] bool empty() const noexcept { return !has_changes() && !global.clarification; }

    friend bool operator==(const ModificationSpec&, const ModificationSpec&) = default;
};

struct ParseOptions {
    // When set, landmark keys must come from this list.
    const std::vector<std::string>* vocabulary{nullptr};
    // With a vocabulary: drop unknown landmark keys with a warning instead of failing.
    bool drop_unknown_landmarks{false};
};

// Parses the modification YAML dialect. Multipliers equal to 1.0 are
// normalized away; entries left without fields are dropped. Duplicate keys:
// last occurrence wins. Throws ParseError. Non-fatal oddities go to `warnings`.
[[nodiscard]] ModificationSpec parse_spec(std::string_view yaml_text, const ParseOptions& options = {},
                                          std::vector<std::string>* warnings = nullptr);

// Compact form: only fields that change something, waypoint entries first,
// then `global`, then landmarks; 4-space indentation. Empty spec -> "".
[[nodiscard]] std::string serialize_spec(const ModificationSpec& spec);

// Clamps every multiplier into [1/3, 3]. Flags are untouched.
[[nodiscard]] ModificationSpec clamp_spec(const ModificationSpec& spec);

// Every multiplier replaced by its reciprocal; stop and clarification cleared.
[[nodiscard]] ModificationSpec reciprocal_spec(const ModificationSpec& spec);

}  // namespace trajtalk
