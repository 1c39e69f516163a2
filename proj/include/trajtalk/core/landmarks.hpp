#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trajtalk/core/trajectory.hpp"
#include "trajtalk/core/vec3.hpp"

namespace trajtalk {

// Default radius within which a waypoint is labeled with a landmark.
inline constexpr double kDefaultProximityThreshold = 0.10;

struct Landmark {
    std::string name;  // e.g. "left wrist", "mouth"
    Vec3 pos;

    friend bool operator==(const Landmark&, const Landmark&) = default;
};

// Named body landmarks with unique, nonempty names.
class LandmarkSet {
public:
    LandmarkSet() = default;
    // Throws ValidationError on empty or duplicate names or non-finite positions.
    explicit LandmarkSet(std::vector<Landmark> landmarks);

    [[nodiscard]] std::span<const Landmark> landmarks() const noexcept { return landmarks_; }
    [[nodiscard]] bool empty() const noexcept { return landmarks_.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return landmarks_.size(); }
    [[nodiscard]] const Landmark* find(std::string_view name) const noexcept;
    [[nodiscard]] bool contains(std::string_view name) const noexcept { return find(name) != nullptr; }
    [[nodiscard]] std::vector<std::string> names() const;

    friend bool operator==(const LandmarkSet&, const LandmarkSet&) = default;

private:
    std::vector<Landmark> landmarks_;
};

// The landmark vocabulary used by the interpreter prompt.
[[nodiscard]] std::span<const std::string_view> canonical_landmark_names() noexcept;

// Closest landmark within threshold; ties go to the lexicographically smaller name.
[[nodiscard]] std::optional<std::string> nearest_landmark(const Waypoint& wp, const LandmarkSet& lms,
                                                          double threshold = kDefaultProximityThreshold);

}  // namespace trajtalk
