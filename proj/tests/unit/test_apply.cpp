#include <doctest.h>

#include <cmath>
#include <random>

#include "trajtalk/apply/apply.hpp"
#include "trajtalk/core/io.hpp"
#include "trajtalk/error.hpp"

using namespace trajtalk;

namespace {

Trajectory line(std::size_t n, double vel = 0.02, double force = 1.0) {
    std::vector<Waypoint> wps;
    for (std::size_t i = 0; i < n; ++i) wps.push_back({0, {0.01 * static_cast<double>(i), 0, 0}, vel, force});
    return Trajectory(retime(std::move(wps)));
}

Trajectory random_traj(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> pos(-0.5, 0.5), vel(0.01, 0.09), force(0.1, 10);
    std::vector<Waypoint> wps;
    for (std::size_t i = 0; i < n; ++i) wps.push_back({0, {pos(rng), pos(rng), pos(rng)}, vel(rng), force(rng)});
    return Trajectory(retime(std::move(wps)));
}

const LandmarkSet& body() {
    static const LandmarkSet lms = load_landmarks(TRAJTALK_DATA_DIR "/landmarks.yaml");
    return lms;
}

Multiplier random_k(std::mt19937_64& rng) {
    return Multiplier(std::exp(std::uniform_real_distribution<double>(std::log(1.0 / 3), std::log(3.0))(rng)));
}

ModificationSpec random_spec(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> coin(0, 1);
    ModificationSpec s;
    if (coin(rng)) s.global.velocity = random_k(rng);
    if (coin(rng)) s.global.force = random_k(rng);
    for (const auto& name : body().names()) {
        if (coin(rng) && coin(rng)) {
            auto& lc = s.landmarks[name];
            if (coin(rng)) lc.attract = random_k(rng);
            if (coin(rng)) lc.velocity = random_k(rng);
            if (coin(rng)) lc.force = random_k(rng);
            if (lc.empty()) lc.attract = random_k(rng);
        }
    }
    if (coin(rng)) {
        const std::size_t idx = std::uniform_int_distribution<std::size_t>(1, n)(rng);
        s.waypoints[idx] = {idx, random_k(rng), std::nullopt};
    }
    return s;
}

// Straight-from-the-definition reference for the attraction step.
Vec3 attract_reference(const Vec3& x, const std::vector<PointSource>& as, double k_p) {
    double wsum = 0;
    for (const auto& a : as) wsum += 1.0 / distance(a.pos, x);
    Vec3 out;
    for (const auto& a : as) out += (-(1.0 / distance(a.pos, x)) / wsum * a.k * k_p) * (x - a.pos);
    return out;
}

}  // namespace

TEST_CASE("gaussian_factor") {
    CHECK(gaussian_factor(2.0, 0.0, 0.07) == 2.0);
    CHECK(gaussian_factor(2.0, 0.07, 0.07) == doctest::Approx(1.6065306597126334).epsilon(1e-14));
    CHECK(gaussian_factor(0.5, 0.07, 0.07) == doctest::Approx(1.0 - 0.5 * 0.6065306597126334).epsilon(1e-14));
    CHECK(std::abs(gaussian_factor(2.0, 0.7, 0.07) - 1.0) < 1e-15);
    CHECK(gaussian_factor(1.0, 0.03, 0.07) == 1.0);
}

TEST_CASE("gaussian_factor lies between 1 and k and decays with distance") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> kd(0.2, 5), dd(0, 1);
    for (int i = 0; i < 5000; ++i) {
        const double k = kd(rng), d1 = dd(rng), d2 = dd(rng);
        const double f1 = gaussian_factor(k, d1, 0.07), f2 = gaussian_factor(k, d2, 0.07);
        CHECK(f1 >= std::min(1.0, k));
        CHECK(f1 <= std::max(1.0, k));
        if (d1 <= d2) CHECK(std::abs(f1 - 1.0) >= std::abs(f2 - 1.0));
    }
}

TEST_CASE("attract_displacement") {
    const ApplyParams p;
    const PointSource origin{{0, 0, 0}, 2.0};
    const Vec3 d = attract_displacement({-0.1, 0, 0}, std::span(&origin, 1), p);
    CHECK(d.x == doctest::Approx(0.002).epsilon(1e-12));
    CHECK(d.y == 0.0);
    CHECK(d.z == 0.0);

    const std::vector<PointSource> pair = {{{0.1, 0, 0}, 2.0}, {{-0.1, 0, 0}, 2.0}};
    CHECK(attract_displacement({0, 0, 0}, pair, p).norm() < 1e-18);

    const PointSource at{{0.3, 0.3, 0.3}, 3.0};
    CHECK(attract_displacement({0.3, 0.3, 0.3 + 1e-9}, std::span(&at, 1), p).norm() < 1e-10);
    CHECK(attract_displacement({0, 0, 0}, {}, p) == Vec3{});
}

TEST_CASE("attract_displacement matches the reference formula") {
    const ApplyParams p;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> pos(-0.5, 0.5), kd(1.01, 3);
    for (int i = 0; i < 2000; ++i) {
        std::vector<PointSource> as(std::uniform_int_distribution<int>(1, 4)(rng));
        for (auto& a : as) a = {{pos(rng), pos(rng), pos(rng)}, kd(rng)};
        const Vec3 x{pos(rng), pos(rng), pos(rng)};
        const Vec3 got = attract_displacement(x, as, p), want = attract_reference(x, as, p.k_p);
        CHECK((got - want).norm() <= 1e-12);
    }
}

TEST_CASE("repulse_displacement") {
    const ApplyParams p;
    const PointSource r{{0, 0, 0}, 0.5};
    const Vec3 d = repulse_displacement({0.08, 0, 0}, std::span(&r, 1), p);
    CHECK(d.x == doctest::Approx(390.625).epsilon(1e-12));
    CHECK(d.y == 0.0);
    CHECK(repulse_displacement({0.2, 0, 0}, std::span(&r, 1), p) == Vec3{});
    CHECK(repulse_displacement({0.1, 0, 0}, std::span(&r, 1), p).norm() == 0.0);
    CHECK(repulse_displacement({0, 0, 0}, std::span(&r, 1), p) == Vec3{});
}

TEST_CASE("cap_norm") {
    const Vec3 c = cap_norm({390.625, 0, 0}, 0.05);
    CHECK(c.x == doctest::Approx(0.05));
    CHECK(cap_norm({0.01, 0, 0}, 0.05) == Vec3{0.01, 0, 0});
    CHECK(cap_norm({}, 0.05) == Vec3{});
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g(0, 1);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 v{g(rng), g(rng), g(rng)};
        const Vec3 out = cap_norm(v, 0.05);
        CHECK(out.norm() <= 0.05 * (1 + 1e-12));
        CHECK(dot(out, v) >= 0);
    }
}

TEST_CASE("displace_positions") {
    const ApplyParams p;
    const LandmarkSet lms({{"mouth", {0, 0, 0}}});
    std::vector<Waypoint> wps = {{0, {0.08, 0, 0}, 0.02, 1}, {1, {0.3, 0, 0}, 0.02, 1}};
    const Trajectory traj(retime(std::move(wps)));
    const auto out = displace_positions(traj, {{"mouth", Multiplier(0.5)}}, lms, p);
    CHECK(out[0].pos.x == doctest::Approx(0.13));
    CHECK(out[1].pos == traj[1].pos);
    CHECK(out.duration() != traj.duration());
    CHECK_THROWS_AS((void)displace_positions(traj, {{"nose", Multiplier(2.0)}}, lms, p), ValidationError);
}

TEST_CASE("attraction never overshoots, repulsion never approaches") {
    const ApplyParams p;
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const Trajectory traj = random_traj(rng, 20);
        const std::string name = body().names()[std::uniform_int_distribution<std::size_t>(0, 6)(rng)];
        const Vec3 lm = body().find(name)->pos;
        const Multiplier k = random_k(rng);
        const auto out = displace_positions(traj, {{name, k}}, body(), p);
        for (std::size_t j = 0; j < traj.size(); ++j) {
            const double before = distance(traj[j].pos, lm), after = distance(out[j].pos, lm);
            CHECK(distance(traj[j].pos, out[j].pos) <= p.delta_max * (1 + 1e-12));
            if (k.value() > 1) CHECK(after <= before);
            else CHECK(after >= before);
            CHECK(out[j].vel == traj[j].vel);
            CHECK(out[j].force == traj[j].force);
        }
    }
}

TEST_CASE("scale_global") {
    const ApplyParams p;
    const auto out = scale_global(line(5), 2.0, 0.5, p);
    for (std::size_t i = 0; i < out.size(); ++i) {
        CHECK(out[i].vel == 0.04);
        CHECK(out[i].force == 0.5);
    }
    CHECK(out.duration() == doctest::Approx(line(5).duration() / 2));
    const auto capped = scale_global(line(5, 0.05), 3.0, 20.0, p);
    CHECK(capped[0].vel == p.v_max);
    CHECK(capped[0].force == p.f_max);
    const auto floored = scale_global(line(5, 0.006), 1.0 / 3, 1, p);
    CHECK(floored[0].vel == p.v_min);
}

TEST_CASE("scale_landmark") {
    const ApplyParams p;
    const auto out = scale_landmark(line(15), {"mouth", {0.07, 0.07, 0}}, 2.0, 1.0, p);
    // Waypoint 8 sits at (0.07, 0, 0), 0.07 m from the landmark.
    CHECK(out[7].vel == doctest::Approx(0.02 * 1.6065306597126334).epsilon(1e-14));
    CHECK(out[7].force == 1.0);
    CHECK(out[7].vel > out[0].vel);
    CHECK(out[7].vel > out[14].vel);
}

TEST_CASE("scale_waypoints") {
    const ApplyParams p;
    const auto out = scale_waypoints(line(5), {{2, {2, Multiplier(0.5), Multiplier(2.0)}}}, p);
    CHECK(out[1].vel == 0.01);
    CHECK(out[1].force == 2.0);
    CHECK(out[0].vel == 0.02);
    try {
        (void)scale_waypoints(line(5), {{99, {99, Multiplier(2.0), std::nullopt}}}, p);
        FAIL("expected RangeError");
    } catch (const RangeError& e) {
        CHECK(std::string(e.what()).find("99") != std::string::npos);
    }
}

TEST_CASE("apply examples") {
    const ApplyParams p;
    const Trajectory traj = load_trajectory(TRAJTALK_DATA_DIR "/feeding_trajectory.yaml");

    CHECK(apply(traj, {}, body(), p) == traj);
    ModificationSpec clar;
    clar.global.clarification = true;
    clar.global.velocity = Multiplier(2.0);
    CHECK(apply(traj, clar, body(), p) == traj);
    ModificationSpec stop;
    stop.global.stop = true;
    CHECK(apply(traj, stop, body(), p) == traj);

    ModificationSpec gentler;
    gentler.global.force = Multiplier(0.5);
    const auto g = apply(traj, gentler, body(), p);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        CHECK(g[i].t == traj[i].t);
        CHECK(g[i].force == traj[i].force * 0.5);
    }

    ModificationSpec faster;
    faster.global.velocity = Multiplier(2.0);
    const auto f = apply(traj, faster, body(), p);
    for (std::size_t i = 0; i < traj.size(); ++i) CHECK(f[i].vel == traj[i].vel * 2);
    CHECK(f.duration() == doctest::Approx(traj.duration() / 2).epsilon(1e-12));

    ModificationSpec unknown;
    unknown.landmarks["nose"].velocity = Multiplier(2.0);
    CHECK_THROWS_AS((void)apply(traj, unknown, body(), p), ValidationError);
    ModificationSpec far;
    far.waypoints[13] = {13, Multiplier(2.0), std::nullopt};
    CHECK_THROWS_AS((void)apply(traj, far, body(), p), RangeError);
}

TEST_CASE("apply: slower near the wrist, then faster everywhere") {
    const ApplyParams p;
    const Vec3 wrist = body().find("left wrist")->pos;
    std::vector<Waypoint> wps = {{0, wrist, 0.04, 1}, {0, wrist + Vec3{0.5, 0, 0}, 0.04, 1}};
    const Trajectory traj(retime(std::move(wps)));
    ModificationSpec slower;
    slower.landmarks["left wrist"].velocity = Multiplier(0.5);
    const auto a = apply(traj, slower, body(), p);
    CHECK(a[0].vel == 0.02);
    CHECK(a[1].vel == doctest::Approx(0.04).epsilon(1e-9));
    ModificationSpec faster;
    faster.global.velocity = Multiplier(2.0);
    const auto b = apply(a, faster, body(), p);
    CHECK(b[0].vel == 0.04);
    CHECK(b[1].vel == doctest::Approx(0.08).epsilon(1e-9));
}

TEST_CASE("a global or waypoint change followed by its reciprocal restores the trajectory") {
    const ApplyParams p;
    std::mt19937_64 rng(21);
    for (int i = 0; i < 300; ++i) {
        std::vector<Waypoint> wps;
        // Velocities and multipliers chosen so no intermediate value hits a clamp.
        std::uniform_real_distribution<double> pos(-0.5, 0.5), vel(0.02, 0.022), force(1, 5), kd(0.6, 1.6);
        for (int j = 0; j < 10; ++j) wps.push_back({0, {pos(rng), pos(rng), pos(rng)}, vel(rng), force(rng)});
        const Trajectory traj(retime(std::move(wps)));
        ModificationSpec s;
        s.global.velocity = Multiplier(kd(rng));
        s.global.force = Multiplier(kd(rng));
        s.waypoints[3] = {3, Multiplier(kd(rng)), Multiplier(kd(rng))};
        const auto back = apply(apply(traj, s, body(), p), reciprocal_spec(s), body(), p);
        for (std::size_t j = 0; j < traj.size(); ++j) {
            CHECK(back[j].vel == doctest::Approx(traj[j].vel).epsilon(1e-12));
            CHECK(back[j].force == doctest::Approx(traj[j].force).epsilon(1e-12));
            CHECK(back[j].t == doctest::Approx(traj[j].t).epsilon(1e-12));
            CHECK(back[j].pos == traj[j].pos);
        }
    }
}

TEST_CASE("apply keeps every waypoint inside the safety limits") {
    const ApplyParams p;
    std::mt19937_64 rng(77);
    for (int i = 0; i < 300; ++i) {
        Trajectory traj = random_traj(rng, 30);
        for (int step = 0; step < 5; ++step) {
            const ModificationSpec s = random_spec(rng, traj.size());
            const Trajectory next = apply(traj, s, body(), p);
            REQUIRE(next.size() == traj.size());
            for (std::size_t j = 0; j < next.size(); ++j) {
                if (s.changes_velocity() || s.changes_force()) {
                    CHECK(next[j].vel >= p.v_min);
                    CHECK(next[j].vel <= p.v_max);
                    CHECK(next[j].force >= 0);
                    CHECK(next[j].force <= p.f_max);
                }
                CHECK(distance(next[j].pos, traj[j].pos) <= p.delta_max * (1 + 1e-12));
            }
            traj = next;
        }
    }
}

TEST_CASE("serial and parallel execution agree bitwise") {
    const ApplyParams p;
    std::mt19937_64 rng(123);
    for (std::size_t n : {2u, 50u, 511u, 512u, 2000u}) {
        for (int i = 0; i < 10; ++i) {
            const Trajectory traj = random_traj(rng, n);
            const ModificationSpec s = random_spec(rng, n);
            const auto a = apply(traj, s, body(), p, Execution::serial);
            const auto b = apply(traj, s, body(), p, Execution::parallel);
            CHECK(a == b);
            CHECK(apply(traj, s, body(), p, Execution::parallel) == b);
        }
    }
}

TEST_CASE("kernels: serial and parallel agree on every kernel") {
    const ApplyParams p;
    std::mt19937_64 rng(321);
    const Trajectory traj = random_traj(rng, 4096);
    const std::vector<PointSource> as = {{{0.1, 0, 0}, 2.0}, {{-0.2, 0.1, 0}, 1.5}};
    const std::vector<PointSource> rs = {{{0, 0.2, 0.1}, 0.5}};
    const std::vector<LocalScale> ls = {{{0, 0, 0}, 2.0, std::nullopt}, {{0.3, 0, 0}, std::nullopt, 0.5}};
    auto a = traj.to_vector(), b = traj.to_vector();
    kernels::serial::displace(a, as, rs, p);
    kernels::parallel::displace(b, as, rs, p);
    kernels::serial::scale_local(a, ls, p.sigma);
    kernels::parallel::scale_local(b, ls, p.sigma);
    kernels::serial::scale_uniform(a, 3.0, 4.0);
    kernels::parallel::scale_uniform(b, 3.0, 4.0);
    CHECK(a == b);
    kernels::serial::clamp(a, p);
    kernels::parallel::clamp(b, p);
    CHECK(a == b);
}

TEST_CASE("apply params") {
    CHECK(apply_params_from_yaml("") == ApplyParams{});
    const auto p = apply_params_from_yaml("sigma: 0.1\nv_max: 0.2\n");
    CHECK(p.sigma == 0.1);
    CHECK(p.v_max == 0.2);
    CHECK(p.k_p == 0.01);
    CHECK(load_apply_params(TRAJTALK_DATA_DIR "/params.yaml") == ApplyParams{});
    CHECK(apply_params_from_json(to_json(p)) == p);
    CHECK_THROWS((void)apply_params_from_yaml("sigmaa: 0.1"));
    CHECK_THROWS((void)apply_params_from_yaml("sigma: -1"));
    CHECK_THROWS((void)apply_params_from_yaml("v_min: 0.5\nv_max: 0.1"));
}
