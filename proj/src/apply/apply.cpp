#include "trajtalk/apply/apply.hpp"

#include <vector>

#include "trajtalk/error.hpp"

namespace trajtalk {

namespace {

struct Sources {
    std::vector<PointSource> attractors;
    std::vector<PointSource> repulsors;
};

Sources split_sources(const std::map<std::string, Multiplier, std::less<>>& attracts, const LandmarkSet& lms) {
    Sources s;
    for (const auto& [name, k] : attracts) {
        const Landmark* lm = lms.find(name);
        if (!lm) throw ValidationError("unknown landmark '" + name + "'");
        if (k.value() > 1.0) s.attractors.push_back({lm->pos, k.value()});
        else if (k.value() < 1.0) s.repulsors.push_back({lm->pos, k.value()});
    }
    return s;
}

void run_displace(std::span<Waypoint> wps, const Sources& s, const ApplyParams& p, Execution exec) {
    if (exec == Execution::serial) kernels::serial::displace(wps, s.attractors, s.repulsors, p);
    else kernels::parallel::displace(wps, s.attractors, s.repulsors, p);
}

void run_scale_local(std::span<Waypoint> wps, std::span<const LocalScale> scales, double sigma, Execution exec) {
    if (exec == Execution::serial) kernels::serial::scale_local(wps, scales, sigma);
    else kernels::parallel::scale_local(wps, scales, sigma);
}

void run_scale_uniform(std::span<Waypoint> wps, double v, double f, Execution exec) {
    if (exec == Execution::serial) kernels::serial::scale_uniform(wps, v, f);
    else kernels::parallel::scale_uniform(wps, v, f);
}

void run_clamp(std::span<Waypoint> wps, const ApplyParams& p, Execution exec) {
    if (exec == Execution::serial) kernels::serial::clamp(wps, p);
    else kernels::parallel::clamp(wps, p);
}

void scale_listed(std::vector<Waypoint>& wps, const std::map<std::size_t, WaypointChange>& changes) {
    for (const auto& [idx, change] : changes) {
        if (idx < 1 || idx > wps.size())
            throw RangeError("waypoint index " + std::to_string(idx) + " outside 1.." + std::to_string(wps.size()));
    }
    for (const auto& [idx, change] : changes) {
        auto& w = wps[idx - 1];
        if (change.velocity) w.vel *= change.velocity->value();
        if (change.force) w.force *= change.force->value();
    }
}

double value_or_one(const std::optional<Multiplier>& m) { return m ? m->value() : 1.0; }

}  // namespace

Trajectory scale_global(const Trajectory& traj, double v_mult, double f_mult, const ApplyParams& params,
                        Execution exec) {
    auto wps = traj.to_vector();
    run_scale_uniform(wps, v_mult, f_mult, exec);
    run_clamp(wps, params, exec);
    return Trajectory(retime(std::move(wps)));
}

Trajectory scale_landmark(const Trajectory& traj, const Landmark& lm, double v_mult, double f_mult,
                          const ApplyParams& params, Execution exec) {
    auto wps = traj.to_vector();
    const LocalScale scale{lm.pos, v_mult, f_mult};
    run_scale_local(wps, std::span(&scale, 1), params.sigma, exec);
    run_clamp(wps, params, exec);
    return Trajectory(retime(std::move(wps)));
}

Trajectory scale_waypoints(const Trajectory& traj, const std::map<std::size_t, WaypointChange>& changes,
                           const ApplyParams& params) {
    auto wps = traj.to_vector();
    scale_listed(wps, changes);
    kernels::serial::clamp(wps, params);
    return Trajectory(retime(std::move(wps)));
}

Trajectory displace_positions(const Trajectory& traj, const std::map<std::string, Multiplier, std::less<>>& attracts,
                              const LandmarkSet& lms, const ApplyParams& params, Execution exec) {
    const Sources sources = split_sources(attracts, lms);
    if (sources.attractors.empty() && sources.repulsors.empty()) return traj;
    auto wps = traj.to_vector();
    run_displace(wps, sources, params, exec);
    return Trajectory(retime(std::move(wps)));
}

Trajectory apply(const Trajectory& traj, const ModificationSpec& spec, const LandmarkSet& lms,
                 const ApplyParams& params, Execution exec) {
    if (spec.global.clarification) return traj;
    const bool moves = spec.changes_position();
    const bool scales = spec.changes_velocity() || spec.changes_force();
    if (!moves && !scales) return traj;

    // Resolve every name and index up front so a bad spec fails before any work.
    std::map<std::string, Multiplier, std::less<>> attracts;
    std::vector<LocalScale> locals;
    for (const auto& [name, change] : spec.landmarks) {
        const Landmark* lm = lms.find(name);
        if (!lm) throw ValidationError("unknown landmark '" + name + "'");
        if (change.attract) attracts.emplace(name, *change.attract);
        if (change.velocity || change.force) {
            LocalScale s{lm->pos, std::nullopt, std::nullopt};
            if (change.velocity) s.vel_k = change.velocity->value();
            if (change.force) s.force_k = change.force->value();
            locals.push_back(s);
        }
    }

    for (const auto& [idx, change] : spec.waypoints) {
        if (idx < 1 || idx > traj.size())
            throw RangeError("waypoint index " + std::to_string(idx) + " outside 1.." + std::to_string(traj.size()));
    }

    auto wps = traj.to_vector();
    if (moves) run_displace(wps, split_sources(attracts, lms), params, exec);
    if (scales) {
        if (!locals.empty()) run_scale_local(wps, locals, params.sigma, exec);
        scale_listed(wps, spec.waypoints);
        if (spec.global.has_scaling())
            run_scale_uniform(wps, value_or_one(spec.global.velocity), value_or_one(spec.global.force), exec);
        run_clamp(wps, params, exec);
    }
    if (moves || spec.changes_velocity()) wps = retime(std::move(wps));
    return Trajectory(std::move(wps));
}

}  // namespace trajtalk
