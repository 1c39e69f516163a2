#include "trajtalk/core/context.hpp"

namespace trajtalk {

std::vector<std::optional<std::string>> landmark_labels(const Trajectory& traj, const LandmarkSet& lms,
                                                        double threshold) {
    std::vector<std::optional<std::string>> labels;
    labels.reserve(traj.size());
    for (const auto& wp : traj.waypoints()) labels.push_back(nearest_landmark(wp, lms, threshold));
    return labels;
}

std::string to_context_yaml(const Trajectory& traj, const LandmarkSet& lms, double threshold) {
    std::string out;
    const auto labels = landmark_labels(traj, lms, threshold);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i > 0) out += '\n';
        out += "waypoint " + std::to_string(i + 1) + ":\n    nearest landmark: ";
        out += labels[i].value_or("none");
    }
    return out;
}

}  // namespace trajtalk
