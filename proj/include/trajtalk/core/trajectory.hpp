#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "trajtalk/core/vec3.hpp"

namespace trajtalk {

// Timed sample of the end-effector plan.
struct Waypoint {
    double t{0};      // seconds
    Vec3 pos;         // meters
    double vel{0};    // speed magnitude, m/s
    double force{0};  // force magnitude, N

    friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

struct Violation {
    std::size_t index;  // 0-based waypoint index
    std::string what;

    friend bool operator==(const Violation&, const Violation&) = default;
};

// Every invariant the waypoint list breaks; empty means valid.
[[nodiscard]] std::vector<Violation> validate(std::span<const Waypoint> waypoints);

// Interpolated executor state at a time inside the trajectory.
struct State {
    Vec3 pos;
    double vel{0};
    double force{0};
};

// Ordered, validated waypoint sequence. Always holds at least two waypoints
// with strictly increasing timestamps.
class Trajectory {
public:
    // Throws ValidationError listing every violation.
    explicit Trajectory(std::vector<Waypoint> waypoints);

    [[nodiscard]] std::size_t size() const noexcept { return waypoints_.size(); }
    [[nodiscard]] const Waypoint& operator[](std::size_t i) const noexcept { return waypoints_[i]; }
    [[nodiscard]] std::span<const Waypoint> waypoints() const noexcept { return waypoints_; }
    [[nodiscard]] double start_time() const noexcept { return waypoints_.front().t; }
    [[nodiscard]] double end_time() const noexcept { return waypoints_.back().t; }
    [[nodiscard]] double duration() const noexcept { return end_time() - start_time(); }

    // Index i such that t_i <= t < t_{i+1}; the last segment for t == end_time().
    [[nodiscard]] std::size_t segment_at(double t) const;

    // Mutable copy of the waypoints for building a modified trajectory.
    [[nodiscard]] std::vector<Waypoint> to_vector() const { return waypoints_; }

    friend bool operator==(const Trajectory&, const Trajectory&) = default;

private:
    std::vector<Waypoint> waypoints_;
};

// Straight-line position, linear vel/force between neighbouring waypoints.
// Throws RangeError outside [start_time, end_time].
[[nodiscard]] State interpolate_state(const Trajectory& traj, double t);

// Recomputes timestamps from segment length and mean endpoint speed, keeping
// the first timestamp and the duration of zero-length segments.
// Throws ValidationError when a segment of nonzero length has zero mean speed.
[[nodiscard]] Trajectory retime(const Trajectory& traj);
[[nodiscard]] std::vector<Waypoint> retime(std::vector<Waypoint> waypoints);

// Fraction of elapsed time, clamped to [0, 1].
[[nodiscard]] double progress_fraction(const Trajectory& traj, double t) noexcept;

}  // namespace trajtalk
