#pragma once

#include <optional>
#include <span>

#include "trajtalk/apply/fields.hpp"
#include "trajtalk/apply/params.hpp"
#include "trajtalk/core/trajectory.hpp"

namespace trajtalk {

enum class Execution { serial, parallel };

// A landmark-scoped velocity/force change, decayed with distance.
struct LocalScale {
    Vec3 pos;
    std::optional<double> vel_k;
    std::optional<double> force_k;
};

// Per-waypoint loops behind the apply operations. Every waypoint is updated
// independently, so the serial and OpenMP variants produce bitwise-identical
// results; the serial one is the reference the tests compare against.
namespace kernels {

namespace serial {
void displace(std::span<Waypoint> wps, std::span<const PointSource> attractors, std::span<const PointSource> repulsors,
              const ApplyParams& params);
void scale_local(std::span<Waypoint> wps, std::span<const LocalScale> scales, double sigma);
void scale_uniform(std::span<Waypoint> wps, double vel_k, double force_k);
void clamp(std::span<Waypoint> wps, const ApplyParams& params);
}  // namespace serial

namespace parallel {
void displace(std::span<Waypoint> wps, std::span<const PointSource> attractors, std::span<const PointSource> repulsors,
              const ApplyParams& params);
void scale_local(std::span<Waypoint> wps, std::span<const LocalScale> scales, double sigma);
void scale_uniform(std::span<Waypoint> wps, double vel_k, double force_k);
void clamp(std::span<Waypoint> wps, const ApplyParams& params);
}  // namespace parallel

}  // namespace kernels
}  // namespace trajtalk
