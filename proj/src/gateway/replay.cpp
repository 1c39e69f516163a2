#include "trajtalk/gateway/replay.hpp"

#include <charconv>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "trajtalk/core/io.hpp"
#include "trajtalk/error.hpp"
#include "trajtalk/interp/interpreter.hpp"
#include "trajtalk/session/clock.hpp"

namespace trajtalk {

namespace {

[[noreturn]] void fail_at(std::string_view origin, const YAML::Node& node, const std::string& what) {
    std::ostringstream msg;
    msg << origin << ":" << node.Mark().line + 1 << ": " << what;
    throw ParseError(msg.str());
}

double number(std::string_view origin, const YAML::Node& node, std::string_view field) {
    if (!node.IsScalar()) fail_at(origin, node, "field '" + std::string(field) + "' must be a number");
    const std::string& s = node.Scalar();
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        fail_at(origin, node, "field '" + std::string(field) + "' is not a number: '" + s + "'");
    return v;
}

std::string text(std::string_view origin, const YAML::Node& node, std::string_view field) {
    if (!node.IsScalar()) fail_at(origin, node, "field '" + std::string(field) + "' must be a string");
    return node.Scalar();
}

}  // namespace

Scenario parse_scenario(std::string_view yaml_text, const std::filesystem::path& base_dir, std::string_view origin) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(yaml_text));
    } catch (const YAML::Exception& e) {
        throw ParseError(std::string(origin) + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    if (!root.IsMap()) fail_at(origin, root, "scenario must be a map");

    std::optional<Trajectory> traj;
    std::optional<LandmarkSet> lms;
    std::optional<Mode> mode;
    std::vector<TimedInput> inputs;
    BackendKind backend = BackendKind::mock;
    std::optional<std::filesystem::path> script;
    ApplyParams params;
    double dt = 0.05;
    double pause_s = 1.7;
    bool have_inputs = false;
    for (const auto& kv : root) {
        const std::string key = kv.first.Scalar();
        const YAML::Node& v = kv.second;
        try {
            if (key == "mode") {
                mode = parse_mode(text(origin, v, key));
            } else if (key == "trajectory") {
                traj = load_trajectory(base_dir / text(origin, v, key));
            } else if (key == "landmarks") {
                lms = load_landmarks(base_dir / text(origin, v, key));
            } else if (key == "backend") {
                backend = parse_backend_kind(text(origin, v, key));
            } else if (key == "script") {
                script = base_dir / text(origin, v, key);
            } else if (key == "params") {
                if (v.IsScalar())
                    params = load_apply_params(base_dir / v.Scalar());
                else
                    params = apply_params_from_yaml(YAML::Dump(v), origin);
            } else if (key == "dt") {
                dt = number(origin, v, key);
                if (!(dt > 0)) fail_at(origin, v, "dt must be > 0");
            } else if (key == "pause_s") {
                pause_s = number(origin, v, key);
                if (!(pause_s >= 0)) fail_at(origin, v, "pause_s must be >= 0");
            } else if (key == "inputs") {
                have_inputs = true;
                if (v.IsNull()) continue;
                if (!v.IsSequence()) fail_at(origin, v, "inputs must be a list");
                for (const auto& rec : v) {
                    if (!rec.IsMap()) fail_at(origin, rec, "input must be a map {at | at_progress, say}");
                    TimedInput in;
                    bool have_say = false;
                    for (const auto& f : rec) {
                        const std::string fk = f.first.Scalar();
                        if (fk == "at") {
                            in.at = number(origin, f.second, fk);
                            if (!(*in.at >= 0)) fail_at(origin, f.second, "at must be >= 0");
                        } else if (fk == "at_progress") {
                            in.at_progress = number(origin, f.second, fk);
                            if (!(*in.at_progress >= 0 && *in.at_progress <= 1))
                                fail_at(origin, f.second, "at_progress must be in [0, 1]");
                        } else if (fk == "say") {
                            in.say = text(origin, f.second, fk);
                            have_say = true;
                        } else {
                            fail_at(origin, f.first, "unknown input field '" + fk + "'");
                        }
                    }
                    if (!have_say || in.say.find_first_not_of(" \t\r\n") == std::string::npos)
                        fail_at(origin, rec, "input needs a non-empty 'say'");
                    if (in.at.has_value() == in.at_progress.has_value())
                        fail_at(origin, rec, "input needs exactly one of 'at' and 'at_progress'");
                    inputs.push_back(std::move(in));
                }
            } else {
                fail_at(origin, kv.first, "unknown scenario field '" + key + "'");
            }
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            fail_at(origin, v, e.what());
        }
    }
    if (!mode) fail_at(origin, root, "scenario needs 'mode'");
    if (!traj) fail_at(origin, root, "scenario needs 'trajectory'");
    if (!lms) fail_at(origin, root, "scenario needs 'landmarks'");
    if (!have_inputs) fail_at(origin, root, "scenario needs 'inputs'");
    if (backend == BackendKind::scripted && !script) fail_at(origin, root, "scripted backend needs 'script'");
    return Scenario{.mode = *mode,
                    .trajectory = std::move(*traj),
                    .landmarks = std::move(*lms),
                    .inputs = std::move(inputs),
                    .backend = backend,
                    .script = std::move(script),
                    .params = params,
                    .dt = dt,
                    .pause_s = pause_s};
}

Scenario load_scenario(const std::filesystem::path& path) {
    return parse_scenario(read_file(path), path.parent_path(), path.string());
}

ReplayResult replay(const Scenario& scenario, const ReplayOptions& options) {
    std::shared_ptr<InterpreterBackend> backend;
    if (scenario.mode != Mode::no_modification) backend = make_backend(scenario.backend, scenario.script);
    return replay(scenario, std::move(backend), options);
}

ReplayResult replay(const Scenario& scenario, std::shared_ptr<InterpreterBackend> backend,
                    const ReplayOptions& options) {
    std::shared_ptr<const Interpreter> interpreter;
    if (backend) interpreter = std::make_shared<Interpreter>(std::move(backend));
    std::shared_ptr<ManualClock> manual;
    std::shared_ptr<Clock> clock;
    if (options.wall_clock) {
        clock = std::make_shared<SystemClock>();
    } else {
        manual = std::make_shared<ManualClock>(0.0);
        clock = manual;
    }

    SessionConfig config;
    config.mode = scenario.mode;
    config.params = scenario.params;
    config.no_modification_pause_s = scenario.pause_s;
    config.execution = options.execution;
    Session session(scenario.trajectory, scenario.landmarks, config, interpreter, clock);

    // Scenario time counts ticks and pauses, independent of the clock source.
    std::uint64_t steps = 0;
    double paused_s = 0;
    auto elapsed = [&] { return static_cast<double>(steps) * scenario.dt + paused_s; };

    std::size_t next = 0;
    while (elapsed() <= options.max_time_s) {
        const Phase phase = session.phase();
        if (phase == Phase::stopped || phase == Phase::finished) break;
        const bool awaiting = phase == Phase::awaiting_clarification;
        if (next < scenario.inputs.size()) {
            const TimedInput& in = scenario.inputs[next];
            const bool due = awaiting || (in.at ? elapsed() + 1e-9 >= *in.at : session.progress() >= *in.at_progress);
            if (due) {
                (void)session.submit_utterance(in.say);
                ++next;
                if (scenario.mode == Mode::no_modification) paused_s += scenario.pause_s;
                continue;
            }
        } else if (awaiting) {
            break;
        }
        (void)session.tick(scenario.dt);
        if (manual) manual->advance(scenario.dt);
        ++steps;
    }

    const SessionState st = session.state();
    ReplayResult r{.mode = scenario.mode,
                   .log = session.log(),
                   .original = st.original,
                   .final_trajectory = st.current,
                   .final_phase = st.phase};
    const auto fractions = modification_progress(r.log);
    r.ccdf = ccdf_remaining(fractions);
    r.latency = latency_stats(r.log);
    r.undelivered = scenario.inputs.size() - next;
    return r;
}

nlohmann::json report_json(const ReplayResult& r) {
    nlohmann::json ccdf = nlohmann::json::array();
    for (const auto& p : r.ccdf) ccdf.push_back({{"progress", p.progress}, {"remaining", p.remaining}});
    nlohmann::json latency = nullptr;
    if (r.latency)
        latency = {{"mean_interpret_s", r.latency->mean_interpret_s},
                   {"mean_apply_s", r.latency->mean_apply_s},
                   {"mean_total_s", r.latency->mean_total_s},
                   {"count", r.latency->count}};
    std::size_t modifications = 0, questions = 0, ignored = 0;
    for (const auto& e : r.log) {
        modifications += e.kind == EventKind::modification;
        questions += e.kind == EventKind::question;
        ignored += e.kind == EventKind::ignored;
    }
    return {{"mode", std::string(to_string(r.mode))},
            {"events", r.log.size()},
            {"modification_count", modifications},
            {"question_count", questions},
            {"ignored_count", ignored},
            {"undelivered_inputs", r.undelivered},
            {"final_phase", std::string(to_string(r.final_phase))},
            {"ccdf", ccdf},
            {"latency", latency},
            {"original_hash", trajectory_hash(r.original)},
            {"final_hash", trajectory_hash(r.final_trajectory)},
            {"final_trajectory", to_json(r.final_trajectory)}};
}

std::string events_jsonl(const std::vector<Event>& log) {
    std::string out;
    for (const auto& e : log) out += to_json(e).dump() + "\n";
    return out;
}

}  // namespace trajtalk
