#include "trajtalk/core/landmarks.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "trajtalk/error.hpp"

namespace trajtalk {

namespace {

constexpr std::array<std::string_view, 7> kCanonical = {
    "left wrist", "right wrist", "left elbow", "right elbow", "left shoulder", "right shoulder", "mouth",
};

}  // namespace

LandmarkSet::LandmarkSet(std::vector<Landmark> landmarks) : landmarks_(std::move(landmarks)) {
    std::set<std::string_view> seen;
    for (const auto& lm : landmarks_) {
        if (lm.name.empty()) throw ValidationError("landmark name must be nonempty");
        if (!lm.pos.finite()) throw ValidationError("landmark '" + lm.name + "' has a non-finite position");
        if (!seen.insert(lm.name).second) throw ValidationError("duplicate landmark name '" + lm.name + "'");
    }
}

const Landmark* LandmarkSet::find(std::string_view name) const noexcept {
    auto it = std::find_if(landmarks_.begin(), landmarks_.end(),
                           [&](const Landmark& lm) { return lm.name == name; });
    return it == landmarks_.end() ? nullptr : &*it;
}

std::vector<std::string> LandmarkSet::names() const {
    std::vector<std::string> out;
    out.reserve(landmarks_.size());
    for (const auto& lm : landmarks_) out.push_back(lm.name);
    return out;
}

std::span<const std::string_view> canonical_landmark_names() noexcept { return kCanonical; }

std::optional<std::string> nearest_landmark(const Waypoint& wp, const LandmarkSet& lms, double threshold) {
    const Landmark* best = nullptr;
    double best_d2 = 0;
    for (const auto& lm : lms.landmarks()) {
        const double d2 = (lm.pos - wp.pos).squared_norm();
        if (!best || d2 < best_d2 || (d2 == best_d2 && lm.name < best->name)) {
            best = &lm;
            best_d2 = d2;
        }
    }
    if (!best || std::sqrt(best_d2) > threshold) return std::nullopt;
    return best->name;
}

}  // namespace trajtalk
