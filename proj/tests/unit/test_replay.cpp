#include <doctest.h>

#include "trajtalk/core/io.hpp"
#include "trajtalk/error.hpp"
#include "trajtalk/gateway/replay.hpp"

using namespace trajtalk;

namespace {

const std::filesystem::path kData = TRAJTALK_DATA_DIR;

std::size_t count(const ReplayResult& r, EventKind k) {
    std::size_t n = 0;
    for (const auto& e : r.log) n += e.kind == k;
    return n;
}

std::string scenario_text(std::string_view inputs) {
    return "mode: bidirectional\ntrajectory: feeding_trajectory.yaml\nlandmarks: landmarks.yaml\ninputs:\n" +
           std::string(inputs);
}

}  // namespace

TEST_CASE("three faster commands saturate at the velocity cap") {
    const auto r = replay(load_scenario(kData / "feeding_faster3.yaml"));
    CHECK(count(r, EventKind::modification) == 3);
    CHECK(r.final_phase == Phase::finished);
    CHECK(r.undelivered == 0);
    for (const auto& w : r.final_trajectory.waypoints()) CHECK(w.vel == ApplyParams{}.v_max);
    CHECK(r.final_trajectory.duration() < r.original.duration());
}

TEST_CASE("no_modification mode leaves the trajectory untouched") {
    const auto r = replay(load_scenario(kData / "feeding_no_modification.yaml"));
    CHECK(r.mode == Mode::no_modification);
    CHECK(count(r, EventKind::modification) == 0);
    CHECK(count(r, EventKind::utterance) > 0);
    CHECK(r.final_trajectory == r.original);
    CHECK(r.ccdf.empty());
    CHECK_FALSE(r.latency);
    const auto rep = report_json(r);
    CHECK(rep.at("original_hash") == rep.at("final_hash"));
    CHECK(rep.at("latency").is_null());
}

TEST_CASE("replays are byte-identical across runs") {
    for (const char* name : {"feeding_faster.yaml", "feeding_scripted_bidirectional.yaml", "scratching_attract.yaml"}) {
        CAPTURE(name);
        const auto s = load_scenario(kData / name);
        const auto a = replay(s), b = replay(s);
        CHECK(events_jsonl(a.log) == events_jsonl(b.log));
        CHECK(report_json(a).dump() == report_json(b).dump());
        const auto serial = replay(s, ReplayOptions{.execution = Execution::serial});
        CHECK(events_jsonl(serial.log) == events_jsonl(a.log));
    }
}

TEST_CASE("scripted bidirectional and unidirectional runs end on the same trajectory") {
    const auto bi = replay(load_scenario(kData / "feeding_scripted_bidirectional.yaml"));
    const auto uni = replay(load_scenario(kData / "feeding_scripted_unidirectional.yaml"));
    CHECK(trajectory_hash(bi.final_trajectory) == trajectory_hash(uni.final_trajectory));
    CHECK(count(bi, EventKind::question) > 0);
    CHECK(count(uni, EventKind::question) == 0);
    CHECK(count(uni, EventKind::assurance) == 0);
}

TEST_CASE("report and event log formats") {
    const auto r = replay(load_scenario(kData / "feeding_faster.yaml"));
    const auto rep = report_json(r);
    CHECK(rep.at("mode") == "bidirectional");
    CHECK(rep.at("modification_count") == 2);
    CHECK(rep.at("events") == r.log.size());
    CHECK(rep.at("final_phase") == "finished");
    CHECK(rep.at("ccdf").at(0).at("progress") == 0.0);
    CHECK(rep.at("ccdf").at(0).at("remaining") == 1.0);
    CHECK(rep.at("latency").at("count") == 2);
    CHECK(trajectory_from_json(rep.at("final_trajectory")) == r.final_trajectory);

    const auto lines = events_jsonl(r.log);
    std::size_t n = 0, pos = 0;
    while ((pos = lines.find('\n', pos)) != std::string::npos) {
        ++n;
        ++pos;
    }
    CHECK(n == r.log.size());
    CHECK(event_from_json(nlohmann::json::parse(lines.substr(0, lines.find('\n')))).kind == EventKind::utterance);
}

TEST_CASE("inputs by progress and clarification answers") {
    const auto s = parse_scenario(scenario_text("  - {at_progress: 0.5, say: blargh}\n"
                                                "  - {at: 0.0, say: slower near my mouth}\n"),
                                  kData);
    // Inputs go out in file order; the second answers the question at once although it was due earlier.
    const auto r = replay(s);
    CHECK(r.undelivered == 0);
    REQUIRE(r.log.size() >= 4);
    const auto& q = r.log[1];
    CHECK(q.kind == EventKind::question);
    CHECK(q.progress == doctest::Approx(0.5).epsilon(0.01));
    CHECK(r.log[3].kind == EventKind::modification);
    CHECK(r.log[3].wall_s == r.log[1].wall_s);
}

TEST_CASE("a stop ends the replay and leaves later inputs undelivered") {
    const auto s = parse_scenario(scenario_text("  - {at: 1.0, say: stop}\n  - {at: 2.0, say: go faster}\n"), kData);
    const auto r = replay(s);
    CHECK(r.final_phase == Phase::stopped);
    CHECK(r.undelivered == 1);
    CHECK(r.final_trajectory == r.original);
}

TEST_CASE("an unanswered question ends the replay") {
    const auto r = replay(parse_scenario(scenario_text("  - {at: 1.0, say: blargh}\n"), kData));
    CHECK(r.final_phase == Phase::awaiting_clarification);
}

TEST_CASE("scenario schema errors") {
    auto bad = [](std::string_view text) { CHECK_THROWS_AS((void)parse_scenario(text, kData), ParseError); };
    bad("mode: bidirectional\n");
    bad(scenario_text("  - {say: go faster}\n"));
    bad(scenario_text("  - {at: 1.0, at_progress: 0.5, say: go faster}\n"));
    bad(scenario_text("  - {at: 1.0, say: ''}\n"));
    bad(scenario_text("  - {at: 1.0, say: go faster, extra: 1}\n"));
    bad(scenario_text("  - {at: 1.0, say: go faster}\n") + "colour: red\n");
    bad(scenario_text("  - {at: 1.0, say: go faster}\n") + "mode: sideways\n");
    bad("[1, 2");
    CHECK_THROWS((void)parse_scenario(scenario_text("  - {at: 1.0, say: x}\n") + "backend: scripted\n", kData));
    CHECK_THROWS((void)load_scenario(kData / "does_not_exist.yaml"));

    try {
        (void)parse_scenario(scenario_text("  - {at: 1.0, say: go faster}\n  - {at: x, say: y}\n"), kData, "s.yaml");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).starts_with("s.yaml:"));
    }
}

TEST_CASE("scenario params: inline map or file") {
    auto s = parse_scenario(scenario_text("  - {at: 1.0, say: go faster}\n") + "params: {v_max: 0.05}\ndt: 0.1\n", kData);
    CHECK(s.params.v_max == 0.05);
    CHECK(s.dt == 0.1);
    const auto r = replay(s);
    for (const auto& w : r.final_trajectory.waypoints()) CHECK(w.vel <= 0.05);
    s = parse_scenario(scenario_text("  - {at: 1.0, say: go faster}\n") + "params: params.yaml\n", kData);
    CHECK(s.params == ApplyParams{});
}
