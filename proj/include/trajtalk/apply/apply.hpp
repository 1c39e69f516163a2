#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "trajtalk/apply/kernels.hpp"
#include "trajtalk/apply/params.hpp"
#include "trajtalk/core/landmarks.hpp"
#include "trajtalk/core/trajectory.hpp"
#include "trajtalk/schema/spec.hpp"

namespace trajtalk {

// Each operation returns a new trajectory with vel clamped to [v_min, v_max],
// force to [0, f_max], and timestamps recomputed by retime().

[[nodiscard]] Trajectory scale_global(const Trajectory& traj, double v_mult, double f_mult, const ApplyParams& params,
                                      Execution exec = Execution::parallel);

[[nodiscard]] Trajectory scale_landmark(const Trajectory& traj, const Landmark& lm, double v_mult, double f_mult,
                                        const ApplyParams& params, Execution exec = Execution::parallel);

// Keys are 1-based waypoint indices. Throws RangeError naming an out-of-range index.
[[nodiscard]] Trajectory scale_waypoints(const Trajectory& traj, const std::map<std::size_t, WaypointChange>& changes,
                                         const ApplyParams& params);

// One potential-field step per waypoint, capped at delta_max. Multipliers > 1
// attract, < 1 repel. Throws ValidationError for a landmark missing from lms.
[[nodiscard]] Trajectory displace_positions(const Trajectory& traj,
                                            const std::map<std::string, Multiplier, std::less<>>& attracts,
                                            const LandmarkSet& lms, const ApplyParams& params,
                                            Execution exec = Execution::parallel);

// Applies one utterance's spec: displacement, then landmark, waypoint and
// global scaling, then clamps and a single retime. Retiming is skipped when
// neither speed nor position changed, so force-only, stop-only and empty specs
// keep the original timestamps. Clarification requests return `traj` unchanged.
[[nodiscard]] Trajectory apply(const Trajectory& traj, const ModificationSpec& spec, const LandmarkSet& lms,
                               const ApplyParams& params, Execution exec = Execution::parallel);

}  // namespace trajtalk
