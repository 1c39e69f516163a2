#include "trajtalk/apply/kernels.hpp"

#include <algorithm>
#include <cstddef>

namespace trajtalk::kernels {

namespace {

// Below this many waypoints the thread fork costs more than the loop.
constexpr std::ptrdiff_t kParallelMin = 512;

inline void displace_one(Waypoint& w, std::span<const PointSource> attractors, std::span<const PointSource> repulsors,
                         const ApplyParams& params) {
    const Vec3 delta = attract_displacement(w.pos, attractors, params) + repulse_displacement(w.pos, repulsors, params);
    w.pos += cap_norm(delta, params.delta_max);
}

inline void scale_local_one(Waypoint& w, std::span<const LocalScale> scales, double sigma) {
    for (const auto& s : scales) {
        const double d = distance(s.pos, w.pos);
        if (s.vel_k) w.vel *= gaussian_factor(*s.vel_k, d, sigma);
        if (s.force_k) w.force *= gaussian_factor(*s.force_k, d, sigma);
    }
}

inline void clamp_one(Waypoint& w, const ApplyParams& params) {
    w.vel = std::clamp(w.vel, params.v_min, params.v_max);
    w.force = std::clamp(w.force, 0.0, params.f_max);
}

}  // namespace

namespace serial {

void displace(std::span<Waypoint> wps, std::span<const PointSource> attractors, std::span<const PointSource> repulsors,
              const ApplyParams& params) {
    for (auto& w : wps) displace_one(w, attractors, repulsors, params);
}

void scale_local(std::span<Waypoint> wps, std::span<const LocalScale> scales, double sigma) {
    for (auto& w : wps) scale_local_one(w, scales, sigma);
}

void scale_uniform(std::span<Waypoint> wps, double vel_k, double force_k) {
    for (auto& w : wps) {
        w.vel *= vel_k;
        w.force *= force_k;
    }
}

void clamp(std::span<Waypoint> wps, const ApplyParams& params) {
    for (auto& w : wps) clamp_one(w, params);
}

}  // namespace serial

namespace parallel {

void displace(std::span<Waypoint> wps, std::span<const PointSource> attractors, std::span<const PointSource> repulsors,
              const ApplyParams& params) {
    const auto n = static_cast<std::ptrdiff_t>(wps.size());
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
    for (std::ptrdiff_t i = 0; i < n; ++i) displace_one(wps[static_cast<std::size_t>(i)], attractors, repulsors, params);
}

void scale_local(std::span<Waypoint> wps, std::span<const LocalScale> scales, double sigma) {
    const auto n = static_cast<std::ptrdiff_t>(wps.size());
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
    for (std::ptrdiff_t i = 0; i < n; ++i) scale_local_one(wps[static_cast<std::size_t>(i)], scales, sigma);
}

void scale_uniform(std::span<Waypoint> wps, double vel_k, double force_k) {
    const auto n = static_cast<std::ptrdiff_t>(wps.size());
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        auto& w = wps[static_cast<std::size_t>(i)];
        w.vel *= vel_k;
        w.force *= force_k;
    }
}

void clamp(std::span<Waypoint> wps, const ApplyParams& params) {
    const auto n = static_cast<std::ptrdiff_t>(wps.size());
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
    for (std::ptrdiff_t i = 0; i < n; ++i) clamp_one(wps[static_cast<std::size_t>(i)], params);
}

}  // namespace parallel

}  // namespace trajtalk::kernels
