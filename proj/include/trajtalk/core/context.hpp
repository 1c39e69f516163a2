#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trajtalk/core/landmarks.hpp"
#include "trajtalk/core/trajectory.hpp"

namespace trajtalk {

// Nearest-landmark label per waypoint (0-based, same order as the trajectory).
[[nodiscard]] std::vector<std::optional<std::string>> landmark_labels(const Trajectory& traj, const LandmarkSet& lms,
                                                                      double threshold = kDefaultProximityThreshold);

// Symbolic trajectory sketch handed to the interpreter:
//
//   waypoint 1:
//       nearest landmark: none
//   waypoint 2:
//       nearest landmark: left wrist
//
// Keys are 1-based. No trailing newline.
[[nodiscard]] std::string to_context_yaml(const Trajectory& traj, const LandmarkSet& lms,
                                          double threshold = kDefaultProximityThreshold);

}  // namespace trajtalk
