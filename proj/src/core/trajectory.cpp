#include "trajtalk/core/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "trajtalk/error.hpp"

namespace trajtalk {

namespace {

constexpr double kZeroLength = 1e-12;

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

std::string describe(std::span<const Violation> violations) {
    std::ostringstream out;
    out << "invalid trajectory:";
    for (const auto& v : violations) out << "\n  waypoint " << v.index << ": " << v.what;
    return out.str();
}

}  // namespace

std::vector<Violation> validate(std::span<const Waypoint> waypoints) {
    std::vector<Violation> out;
    if (waypoints.size() < 2) out.push_back({0, "trajectory needs at least 2 waypoints"});
    for (std::size_t i = 0; i < waypoints.size(); ++i) {
        const auto& w = waypoints[i];
        if (!std::isfinite(w.t)) out.push_back({i, "t must be finite"});
        else if (w.t < 0) out.push_back({i, "t >= 0"});
        if (!w.pos.finite()) out.push_back({i, "pos must be finite"});
        if (!finite_nonneg(w.vel)) out.push_back({i, "vel >= 0"});
        if (!finite_nonneg(w.force)) out.push_back({i, "force >= 0"});
        if (i > 0 && !(w.t > waypoints[i - 1].t)) out.push_back({i, "timestamps strictly increasing"});
    }
    return out;
}

Trajectory::Trajectory(std::vector<Waypoint> waypoints) : waypoints_(std::move(waypoints)) {
    if (auto v = validate(waypoints_); !v.empty()) throw ValidationError(describe(v));
}

std::size_t Trajectory::segment_at(double t) const {
    auto it = std::upper_bound(waypoints_.begin(), waypoints_.end(), t,
                               [](double value, const Waypoint& w) { return value < w.t; });
    auto idx = static_cast<std::size_t>(std::distance(waypoints_.begin(), it));
    if (idx == 0) return 0;
    return std::min(idx - 1, waypoints_.size() - 2);
}

State interpolate_state(const Trajectory& traj, double t) {
    if (!(t >= traj.start_time() && t <= traj.end_time())) {
        std::ostringstream msg;
        msg << "time " << t << " outside trajectory interval [" << traj.start_time() << ", "
            << traj.end_time() << "]";
        throw RangeError(msg.str());
    }
    const std::size_t i = traj.segment_at(t);
    const Waypoint& a = traj[i];
    const Waypoint& b = traj[i + 1];
    if (t == a.t) return {a.pos, a.vel, a.force};
    if (t == b.t) return {b.pos, b.vel, b.force};
    const double s = (t - a.t) / (b.t - a.t);
    return {a.pos + (b.pos - a.pos) * s, a.vel + (b.vel - a.vel) * s, a.force + (b.force - a.force) * s};
}

std::vector<Waypoint> retime(std::vector<Waypoint> waypoints) {
    if (waypoints.empty()) return waypoints;
    double t = waypoints.front().t;
    double prev_original = waypoints.front().t;
    for (std::size_t i = 1; i < waypoints.size(); ++i) {
        const double original_dt = waypoints[i].t - prev_original;
        prev_original = waypoints[i].t;
        const double length = distance(waypoints[i].pos, waypoints[i - 1].pos);
        double dt = original_dt;
        if (length > kZeroLength) {
            const double mean_speed = 0.5 * (waypoints[i - 1].vel + waypoints[i].vel);
            if (!(mean_speed > 0)) {
                std::ostringstream msg;
                msg << "cannot retime segment " << i - 1 << "->" << i
                    << ": zero mean speed over nonzero length " << length << " m";
                throw ValidationError(msg.str());
            }
            dt = length / mean_speed;
        }
        t += dt;
        waypoints[i].t = t;
    }
    return waypoints;
}

Trajectory retime(const Trajectory& traj) { return Trajectory(retime(traj.to_vector())); }

double progress_fraction(const Trajectory& traj, double t) noexcept {
    const double d = traj.duration();
    if (!(d > 0)) return 1.0;
    return std::clamp((t - traj.start_time()) / d, 0.0, 1.0);
}

}  // namespace trajtalk
